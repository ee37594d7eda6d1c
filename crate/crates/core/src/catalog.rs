//! Built-in knots. Each is a 2-bridge presentation `⟨x, y | w x = y w⟩`;
//! anything else comes from a presentation file.

use crate::presentation::{parse_word, Presentation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub aliases: &'static [&'static str],
    /// The word `w` in `x`, `y`.
    pub word: &'static str,
}

pub const ENTRIES: &[CatalogEntry] = &[
    CatalogEntry { name: "3_1", aliases: &["trefoil", "3.1", "31"], word: "x y" },
    CatalogEntry { name: "5_2", aliases: &["5.2", "52"], word: "x^-1 y^-1 x y x^-1 y^-1" },
];

impl CatalogEntry {
    pub fn presentation(&self) -> Presentation {
        Presentation::two_bridge(parse_word(self.word, &["x", "y"]).expect("catalog words parse"))
    }
}

pub fn find(name: &str) -> Option<&'static CatalogEntry> {
    let key = name.trim().to_ascii_lowercase();
    ENTRIES.iter().find(|e| e.name == key || e.aliases.contains(&key.as_str()))
}

pub fn lookup(name: &str) -> Option<Presentation> {
    find(name).map(CatalogEntry::presentation)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    ENTRIES.iter().map(|e| e.name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foxcalc::alexander_polynomial;
    use crate::reps::riley_polynomial;

    #[test]
    fn entries_are_consistent() {
        for e in ENTRIES {
            let p = e.presentation();
            assert!(p.is_valid(), "{}", e.name);
            let phi = riley_polynomial(p.bridge_word().unwrap()).unwrap();
            let alex = alexander_polynomial(&p).unwrap();
            assert!(phi.at_u_zero().equals_up_to_unit(&alex), "{}", e.name);
        }
        assert_eq!(find("Trefoil").unwrap().name, "3_1");
        assert!(lookup("4_1").is_none());
    }
}
