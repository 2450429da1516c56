use std::fmt;
use std::hash::{Hash, Hasher};

/// Byte range in the source text a formula node was parsed from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn join(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

/// A core-form InqLTL formula.
///
/// The span is diagnostic metadata only: it is ignored by equality and
/// hashing, so a parsed formula compares equal to a programmatically built
/// one with the same shape. Formulas built by expansion inherit the span of
/// the surface construct they came from.
#[derive(Clone, Debug)]
pub struct Formula {
    pub kind: FormulaKind,
    pub span: Option<Span>,
}

/// Core node kinds. `Top` is a native constant (satisfied by every team and
/// every macro-path) rather than an encoding through implication, so that
/// fragment classification sees `top -> f` with an atomic positive
/// antecedent. Negation has no node of its own: `!f` is `Impl(f, Bot)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FormulaKind {
    Bot,
    Top,
    Atom(String),
    /// Boolean (inquisitive) disjunction, written `|`.
    BDis(Box<Formula>, Box<Formula>),
    Conj(Box<Formula>, Box<Formula>),
    /// Intuitionistic implication, written `->`.
    Impl(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.kind.hash(state);
    }
}

impl Formula {
    pub fn new(kind: FormulaKind) -> Self {
        Formula { kind, span: None }
    }

    pub fn with_span(kind: FormulaKind, span: Option<Span>) -> Self {
        Formula { kind, span }
    }

    pub fn bot() -> Self {
        Formula::new(FormulaKind::Bot)
    }

    pub fn top() -> Self {
        Formula::new(FormulaKind::Top)
    }

    pub fn atom(name: impl Into<String>) -> Self {
        Formula::new(FormulaKind::Atom(name.into()))
    }

    pub fn bdis(lhs: Formula, rhs: Formula) -> Self {
        Formula::new(FormulaKind::BDis(Box::new(lhs), Box::new(rhs)))
    }

    pub fn conj(lhs: Formula, rhs: Formula) -> Self {
        Formula::new(FormulaKind::Conj(Box::new(lhs), Box::new(rhs)))
    }

    pub fn impl_(lhs: Formula, rhs: Formula) -> Self {
        Formula::new(FormulaKind::Impl(Box::new(lhs), Box::new(rhs)))
    }

    /// `!f`, i.e. `f -> bot`.
    pub fn neg(f: Formula) -> Self {
        Formula::impl_(f, Formula::bot())
    }

    pub fn next(f: Formula) -> Self {
        Formula::new(FormulaKind::Next(Box::new(f)))
    }

    pub fn until(lhs: Formula, rhs: Formula) -> Self {
        Formula::new(FormulaKind::Until(Box::new(lhs), Box::new(rhs)))
    }

    pub fn release(lhs: Formula, rhs: Formula) -> Self {
        Formula::new(FormulaKind::Release(Box::new(lhs), Box::new(rhs)))
    }

    /// `F f`, i.e. `top U f`.
    pub fn eventually(f: Formula) -> Self {
        Formula::until(Formula::top(), f)
    }

    /// `G f`, i.e. `bot R f`.
    pub fn always(f: Formula) -> Self {
        Formula::release(Formula::bot(), f)
    }

    /// True when this node is a negation, i.e. an implication into `bot`.
    /// Such implications count as `!` for classification and depth.
    pub fn is_negation(&self) -> bool {
        matches!(&self.kind,
            FormulaKind::Impl(_, rhs) if matches!(rhs.kind, FormulaKind::Bot))
    }

    pub fn children(&self) -> Vec<&Formula> {
        match &self.kind {
            FormulaKind::Bot | FormulaKind::Top | FormulaKind::Atom(_) => vec![],
            FormulaKind::Next(a) => vec![a],
            FormulaKind::BDis(a, b)
            | FormulaKind::Conj(a, b)
            | FormulaKind::Impl(a, b)
            | FormulaKind::Until(a, b)
            | FormulaKind::Release(a, b) => vec![a, b],
        }
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Collect the distinct atom names appearing in the formula.
    pub fn atoms(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a str>) {
        if let FormulaKind::Atom(name) = &self.kind {
            out.push(name);
        }
        for c in self.children() {
            c.collect_atoms(out);
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::formula::print::pretty(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_ignores_spans() {
        let mut a = Formula::conj(Formula::atom("p"), Formula::bot());
        a.span = Some(Span::new(0, 7));
        let b = Formula::conj(Formula::atom("p"), Formula::bot());
        assert_eq!(a, b);
    }

    #[test]
    fn negation_shape() {
        assert!(Formula::neg(Formula::atom("p")).is_negation());
        assert!(!Formula::impl_(Formula::atom("p"), Formula::atom("q")).is_negation());
        // top -> bot is still a negation shape (of top)
        assert!(Formula::impl_(Formula::top(), Formula::bot()).is_negation());
    }
}
