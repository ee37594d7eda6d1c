//! Free-group words and deficiency-one knot group presentations.
//!
//! Words are stored as sequences of `±1` letters over generator indices and
//! are always freely reduced. Generator names only appear when parsing or
//! printing.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// A single letter `x_gen^{±1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub exp: i8,
}

impl Letter {
    pub fn new(gen: usize, exp: i8) -> Self {
        assert!(exp == 1 || exp == -1, "letter exponent must be ±1");
        Self { gen, exp }
    }

    pub fn inverse(self) -> Self {
        Self { gen: self.gen, exp: -self.exp }
    }

    fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.exp == -other.exp
    }
}

/// A freely reduced element of a free group.
///
/// Ordering is shortlex, which gives group ring elements a canonical term
/// order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// The one-letter word `x_gen`.
    pub fn generator(gen: usize) -> Self {
        Self(vec![Letter::new(gen, 1)])
    }

    /// Builds a word from arbitrary letters, freely reducing them.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut stack: Vec<Letter> = Vec::new();
        for l in letters {
            match stack.last() {
                Some(&top) if top.cancels(l) => {
                    stack.pop();
                }
                _ => stack.push(l),
            }
        }
        Self(stack)
    }

    /// Convenience constructor from `(gen, exp)` pairs.
    pub fn from_pairs(pairs: &[(usize, i8)]) -> Self {
        Self::from_letters(pairs.iter().map(|&(g, e)| Letter::new(g, e)))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Free product `self · other`.
    pub fn mul(&self, other: &Word) -> Self {
        // only the junction can cancel
        let mut left = self.0.clone();
        let mut right = other.0.iter().peekable();
        while let (Some(&a), Some(&&b)) = (left.last(), right.peek()) {
            if a.cancels(b) {
                left.pop();
                right.next();
            } else {
                break;
            }
        }
        left.extend(right);
        Self(left)
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(Word::empty(), |acc, _| acc.mul(&base))
    }

    /// Exponent sum of generator `gen`.
    pub fn exponent_sum(&self, gen: usize) -> i64 {
        self.0.iter().filter(|l| l.gen == gen).map(|l| l.exp as i64).sum()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.gen).max()
    }

    /// Prints the word with runs collapsed to powers, e.g. `x^2 y^-1`.
    /// The empty word prints as `1`.
    pub fn display_with<S: AsRef<str>>(&self, names: &[S]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let mut out: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == l {
                j += 1;
            }
            let n = (j - i) as i64 * l.exp as i64;
            let name = names.get(l.gen).map(|s| s.as_ref().to_string()).unwrap_or_else(|| format!("x{}", l.gen));
            out.push(if n == 1 { name } else { format!("{name}^{n}") });
            i = j;
        }
        out.join(" ")
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with::<&str>(&[]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed exponent in token `{0}`")]
    MalformedExponent(String),
    #[error("empty token `{0}`")]
    EmptyToken(String),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    InWord { line: usize, source: Box<ParseError> },
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// Parses a whitespace-separated word such as `x^-1 y^-1 x y`.
///
/// Each token is an identifier from `names`, optionally followed by `^` and a
/// signed nonzero integer. The result is freely reduced.
pub fn parse_word<S: AsRef<str>>(text: &str, names: &[S]) -> Result<Word, ParseError> {
    let mut letters = Vec::new();
    for token in text.split_whitespace() {
        let (ident, exp) = match token.split_once('^') {
            Some((ident, exp_text)) => {
                let exp: i64 = exp_text.parse().map_err(|_| ParseError::MalformedExponent(token.to_string()))?;
                if exp == 0 {
                    return Err(ParseError::MalformedExponent(token.to_string()));
                }
                (ident, exp)
            }
            None => (token, 1),
        };
        if ident.is_empty() {
            return Err(ParseError::EmptyToken(token.to_string()));
        }
        let gen = names
            .iter()
            .position(|n| n.as_ref() == ident)
            .ok_or_else(|| ParseError::UnknownGenerator(ident.to_string()))?;
        let unit = Letter::new(gen, if exp > 0 { 1 } else { -1 });
        letters.extend(std::iter::repeat_n(unit, exp.unsigned_abs() as usize));
    }
    Ok(Word::from_letters(letters))
}

/// The relator `w·x·w⁻¹·y⁻¹` of the presentation `⟨x, y | wx = yw⟩`.
pub fn conjugation_relator(w: &Word, x: &Word, y: &Word) -> Word {
    w.mul(x).mul(&w.inverse()).mul(&y.inverse())
}

/// A problem reported by [`Presentation::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Deficiency { generators: usize, relators: usize },
    AlphaLength { generators: usize, alpha: usize },
    AlphaNotHomomorphism { relator: usize, weight: i64 },
    MeridianOutOfRange { meridian: usize },
    MeridianNotUnit { alpha: i64 },
    GeneratorOutOfRange { relator: usize, gen: usize },
    BridgeWordOutOfRange,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Deficiency { generators, relators } => write!(
                f,
                "deficiency: {generators} generators but {relators} relators (need {})",
                generators.saturating_sub(1)
            ),
            Violation::AlphaLength { generators, alpha } => {
                write!(f, "alpha has {alpha} entries for {generators} generators")
            }
            Violation::AlphaNotHomomorphism { relator, weight } => {
                write!(f, "relator {relator} has nonzero alpha weight {weight}")
            }
            Violation::MeridianOutOfRange { meridian } => {
                write!(f, "meridian index {meridian} out of range")
            }
            Violation::MeridianNotUnit { alpha } => {
                write!(f, "alpha(meridian) = t^{alpha}, expected t")
            }
            Violation::GeneratorOutOfRange { relator, gen } => {
                write!(f, "relator {relator} uses generator index {gen} out of range")
            }
            Violation::BridgeWordOutOfRange => {
                write!(f, "2-bridge word uses generators other than x, y")
            }
        }
    }
}

/// A knot group presentation `⟨x_1..x_k | r_1..r_{k-1}⟩` together with the
/// abelianization `α : x_i ↦ t^{alpha_i}` and a designated meridian.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    names: Vec<String>,
    relators: Vec<Word>,
    meridian: usize,
    alpha: Vec<i64>,
    bridge_word: Option<Word>,
}

impl Presentation {
    /// General constructor. Nothing is checked here; see [`Self::validate`].
    pub fn new(names: Vec<String>, relators: Vec<Word>, meridian: usize, alpha: Vec<i64>) -> Self {
        Self { names, relators, meridian, alpha, bridge_word: None }
    }

    /// Wirtinger-style presentation: every generator is a meridian.
    pub fn wirtinger(names: Vec<String>, relators: Vec<Word>) -> Self {
        let alpha = vec![1; names.len()];
        Self::new(names, relators, 0, alpha)
    }

    /// `⟨x, y | w x w⁻¹ y⁻¹⟩` for a word `w` in generators 0 (`x`) and 1 (`y`).
    pub fn two_bridge(w: Word) -> Self {
        Self::two_bridge_named(w, vec!["x".into(), "y".into()])
    }

    fn two_bridge_named(w: Word, names: Vec<String>) -> Self {
        let rel = conjugation_relator(&w, &Word::generator(0), &Word::generator(1));
        Self { names, relators: vec![rel], meridian: 0, alpha: vec![1, 1], bridge_word: Some(w) }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn meridian(&self) -> usize {
        self.meridian
    }

    pub fn alpha(&self) -> &[i64] {
        &self.alpha
    }

    /// The word `w` when the presentation is of the form `⟨x, y | wx = yw⟩`.
    pub fn bridge_word(&self) -> Option<&Word> {
        self.bridge_word.as_ref()
    }

    /// Exponent of `t` in `α(word)`.
    pub fn alpha_of(&self, word: &Word) -> i64 {
        word.letters().iter().map(|l| self.alpha.get(l.gen).copied().unwrap_or(0) * l.exp as i64).sum()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn display_word(&self, w: &Word) -> String {
        w.display_with(&self.names)
    }

    /// Checks deficiency one, that `α` kills every relator, and that the
    /// meridian maps to `t`. Never fails; returns every violation found.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let k = self.names.len();
        if k == 0 || self.relators.len() + 1 != k {
            out.push(Violation::Deficiency { generators: k, relators: self.relators.len() });
        }
        for (i, r) in self.relators.iter().enumerate() {
            if let Some(g) = r.max_generator().filter(|&g| g >= k) {
                out.push(Violation::GeneratorOutOfRange { relator: i, gen: g });
            }
        }
        if self.alpha.len() != k {
            out.push(Violation::AlphaLength { generators: k, alpha: self.alpha.len() });
        } else {
            for (i, r) in self.relators.iter().enumerate() {
                let weight = self.alpha_of(r);
                if weight != 0 {
                    out.push(Violation::AlphaNotHomomorphism { relator: i, weight });
                }
            }
        }
        if self.meridian >= k {
            out.push(Violation::MeridianOutOfRange { meridian: self.meridian });
        } else if let Some(&a) = self.alpha.get(self.meridian) {
            if a != 1 {
                out.push(Violation::MeridianNotUnit { alpha: a });
            }
        }
        if let Some(w) = &self.bridge_word {
            if k != 2 || w.max_generator().is_some_and(|g| g > 1) {
                out.push(Violation::BridgeWordOutOfRange);
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Parses the line-oriented presentation file format:
    ///
    /// ```text
    /// gens: x y
    /// rel: x y x y^-1 x^-1 y^-1
    /// meridian: x
    /// alpha: 1 1
    /// ```
    ///
    /// or the inline 2-bridge form `twobridge w: x^-1 y^-1 x y x^-1 y^-1`.
    /// Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut names: Option<Vec<String>> = None;
        let mut rel_lines: Vec<(usize, String)> = Vec::new();
        let mut bridge: Option<(usize, String)> = None;
        let mut meridian: Option<(usize, String)> = None;
        let mut alpha: Option<(usize, String)> = None;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |msg: &str| ParseError::Syntax { line: line_no, msg: msg.to_string() };
            let (key, value) = line.split_once(':').ok_or_else(|| syntax("expected `key: value`"))?;
            let value = value.trim().to_string();
            match key.trim() {
                "gens" => {
                    if names.is_some() {
                        return Err(syntax("duplicate `gens` line"));
                    }
                    let list: Vec<String> = value.split_whitespace().map(String::from).collect();
                    if list.is_empty() {
                        return Err(syntax("no generators"));
                    }
                    if let Some(bad) = list.iter().find(|n| !is_identifier(n)) {
                        return Err(syntax(&format!("invalid generator name `{bad}`")));
                    }
                    for (i, n) in list.iter().enumerate() {
                        if list[..i].contains(n) {
                            return Err(syntax(&format!("duplicate generator `{n}`")));
                        }
                    }
                    names = Some(list);
                }
                "rel" => rel_lines.push((line_no, value)),
                "meridian" => meridian = Some((line_no, value)),
                "alpha" => alpha = Some((line_no, value)),
                k if k.split_whitespace().collect::<Vec<_>>() == ["twobridge", "w"] => bridge = Some((line_no, value)),
                other => return Err(syntax(&format!("unknown key `{other}`"))),
            }
        }

        let in_word = |line: usize| move |e: ParseError| ParseError::InWord { line, source: Box::new(e) };

        let mut p = if let Some((line, w_text)) = bridge {
            if !rel_lines.is_empty() {
                return Err(ParseError::Syntax { line, msg: "`twobridge` cannot be combined with `rel`".into() });
            }
            let names = names.unwrap_or_else(|| vec!["x".into(), "y".into()]);
            if names.len() != 2 {
                return Err(ParseError::Syntax { line, msg: "`twobridge` needs exactly two generators".into() });
            }
            let w = parse_word(&w_text, &names).map_err(in_word(line))?;
            Self::two_bridge_named(w, names)
        } else {
            let names = names.ok_or(ParseError::Syntax { line: 0, msg: "missing `gens` line".into() })?;
            let relators = rel_lines
                .iter()
                .map(|(line, t)| parse_word(t, &names).map_err(in_word(*line)))
                .collect::<Result<Vec<_>, _>>()?;
            Self::wirtinger(names, relators)
        };

        if let Some((line, m)) = meridian {
            p.meridian = p
                .generator_index(&m)
                .ok_or(ParseError::InWord { line, source: Box::new(ParseError::UnknownGenerator(m)) })?;
        }
        if let Some((line, a)) = alpha {
            p.alpha = a
                .split_whitespace()
                .map(|v| v.parse::<i64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| ParseError::Syntax { line, msg: "alpha entries must be integers".into() })?;
        }
        Ok(p)
    }

    /// Serializes back to the file format accepted by [`Self::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("gens: {}\n", self.names.join(" "));
        match &self.bridge_word {
            Some(w) => out.push_str(&format!("twobridge w: {}\n", self.display_word(w))),
            None => {
                for r in &self.relators {
                    out.push_str(&format!("rel: {}\n", self.display_word(r)));
                }
            }
        }
        out.push_str(&format!("meridian: {}\n", self.names[self.meridian.min(self.names.len() - 1)]));
        let alpha: Vec<String> = self.alpha.iter().map(|a| a.to_string()).collect();
        out.push_str(&format!("alpha: {}\n", alpha.join(" ")));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const XY: [&str; 2] = ["x", "y"];

    #[test]
    fn parse_five_two_word() {
        let w = parse_word("x^-1 y^-1 x y x^-1 y^-1", &XY).unwrap();
        assert_eq!(w, Word::from_pairs(&[(0, -1), (1, -1), (0, 1), (1, 1), (0, -1), (1, -1)]));
    }

    #[test]
    fn parse_reduces() {
        assert!(parse_word("x x^-1", &XY).unwrap().is_empty());
        assert_eq!(parse_word("x y y^-1 x", &XY).unwrap(), Word::from_pairs(&[(0, 1), (0, 1)]));
        assert_eq!(parse_word("x^3 x^-2", &XY).unwrap(), Word::generator(0));
        assert!(parse_word("", &XY).unwrap().is_empty());
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_word("x z", &XY), Err(ParseError::UnknownGenerator("z".into())));
        assert!(matches!(parse_word("x^a", &XY), Err(ParseError::MalformedExponent(_))));
        assert!(matches!(parse_word("x^0", &XY), Err(ParseError::MalformedExponent(_))));
        assert!(matches!(parse_word("x^", &XY), Err(ParseError::MalformedExponent(_))));
        assert!(matches!(parse_word("^2", &XY), Err(ParseError::EmptyToken(_))));
    }

    #[test]
    fn conjugation_relators() {
        let x = Word::generator(0);
        let y = Word::generator(1);
        // trefoil: w = xy gives x y x y^-1 x^-1 y^-1
        let w = Word::from_pairs(&[(0, 1), (1, 1)]);
        assert_eq!(
            conjugation_relator(&w, &x, &y),
            Word::from_pairs(&[(0, 1), (1, 1), (0, 1), (1, -1), (0, -1), (1, -1)])
        );
        assert_eq!(conjugation_relator(&Word::empty(), &x, &y), Word::from_pairs(&[(0, 1), (1, -1)]));
        // 5_2: no cancellation at any junction, all 14 letters survive
        let w52 = parse_word("x^-1 y^-1 x y x^-1 y^-1", &XY).unwrap();
        let r = conjugation_relator(&w52, &x, &y);
        assert_eq!(r, parse_word("x^-1 y^-1 x y x^-1 y^-1 x y x y^-1 x^-1 y x y^-1", &XY).unwrap());
    }

    #[test]
    fn validate_reports() {
        let w = parse_word("x^-1 y^-1 x y x^-1 y^-1", &XY).unwrap();
        assert!(Presentation::two_bridge(w).validate().is_empty());

        let x = Word::generator(0);
        let two_rel = Presentation::wirtinger(
            vec!["x".into(), "y".into()],
            vec![Word::from_pairs(&[(0, 1), (1, -1)]), Word::from_pairs(&[(0, 1), (1, -1)])],
        );
        assert!(matches!(two_rel.validate()[..], [Violation::Deficiency { .. }]));

        let bad = Presentation::wirtinger(vec!["x".into(), "y".into()], vec![x.mul(&Word::generator(1))]);
        assert_eq!(bad.validate(), vec![Violation::AlphaNotHomomorphism { relator: 0, weight: 2 }]);
    }

    #[test]
    fn file_round_trip() {
        let text = "# 5_2\ntwobridge w: x^-1 y^-1 x y x^-1 y^-1\n";
        let p = Presentation::parse(text).unwrap();
        assert_eq!(p.relators()[0].len(), 14);
        assert_eq!(Presentation::parse(&p.to_text()).unwrap(), p);

        let w = "gens: a b c\nrel: a b a^-1 c^-1\nrel: b c b^-1 a^-1\nmeridian: b\n";
        let p = Presentation::parse(w).unwrap();
        assert_eq!(p.meridian(), 1);
        assert_eq!(p.alpha(), &[1, 1, 1]);
        assert!(p.is_valid());
        assert_eq!(Presentation::parse(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn file_errors() {
        assert!(Presentation::parse("rel: x\n").is_err());
        assert!(Presentation::parse("gens: x y\nrel: x z\n").is_err());
        assert!(Presentation::parse("gens: x x\n").is_err());
        assert!(Presentation::parse("gens: x y\nbogus: 1\n").is_err());
        assert!(Presentation::parse("gens: x y\nalpha: 1 q\n").is_err());
    }

    #[test]
    fn display_collapses_runs() {
        let w = Word::from_pairs(&[(0, 1), (0, 1), (1, -1)]);
        assert_eq!(w.display_with(&XY), "x^2 y^-1");
        assert_eq!(Word::empty().display_with(&XY), "1");
    }
}
