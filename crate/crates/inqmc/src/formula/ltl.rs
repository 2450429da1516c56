use std::fmt;

use super::{Formula, FormulaKind};

/// Classical LTL in negation normal form.
///
/// This is the target of the singleton collapse: on a one-trace team the
/// inquisitive connectives coincide with their classical readings
/// (`|` becomes disjunction, `->` material implication, `bot` falsity), so a
/// core formula can be read as plain LTL and evaluated trace by trace.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LtlFormula {
    True,
    False,
    Prop(String),
    NProp(String),
    And(Box<LtlFormula>, Box<LtlFormula>),
    Or(Box<LtlFormula>, Box<LtlFormula>),
    Next(Box<LtlFormula>),
    Until(Box<LtlFormula>, Box<LtlFormula>),
    Release(Box<LtlFormula>, Box<LtlFormula>),
}

impl LtlFormula {
    /// Conjunction with constant folding.
    pub fn and(a: LtlFormula, b: LtlFormula) -> Self {
        match (a, b) {
            (LtlFormula::False, _) | (_, LtlFormula::False) => LtlFormula::False,
            (LtlFormula::True, x) | (x, LtlFormula::True) => x,
            (a, b) => LtlFormula::And(Box::new(a), Box::new(b)),
        }
    }

    /// Disjunction with constant folding.
    pub fn or(a: LtlFormula, b: LtlFormula) -> Self {
        match (a, b) {
            (LtlFormula::True, _) | (_, LtlFormula::True) => LtlFormula::True,
            (LtlFormula::False, x) | (x, LtlFormula::False) => x,
            (a, b) => LtlFormula::Or(Box::new(a), Box::new(b)),
        }
    }

    pub fn next(a: LtlFormula) -> Self {
        LtlFormula::Next(Box::new(a))
    }

    pub fn until(a: LtlFormula, b: LtlFormula) -> Self {
        LtlFormula::Until(Box::new(a), Box::new(b))
    }

    pub fn release(a: LtlFormula, b: LtlFormula) -> Self {
        LtlFormula::Release(Box::new(a), Box::new(b))
    }

    pub fn eventually(a: LtlFormula) -> Self {
        LtlFormula::until(LtlFormula::True, a)
    }

    pub fn always(a: LtlFormula) -> Self {
        LtlFormula::release(LtlFormula::False, a)
    }

    pub fn size(&self) -> usize {
        match self {
            LtlFormula::True | LtlFormula::False | LtlFormula::Prop(_) | LtlFormula::NProp(_) => 1,
            LtlFormula::Next(a) => 1 + a.size(),
            LtlFormula::And(a, b)
            | LtlFormula::Or(a, b)
            | LtlFormula::Until(a, b)
            | LtlFormula::Release(a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl fmt::Display for LtlFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LtlFormula::True => write!(f, "true"),
            LtlFormula::False => write!(f, "false"),
            LtlFormula::Prop(p) => write!(f, "{p}"),
            LtlFormula::NProp(p) => write!(f, "!{p}"),
            LtlFormula::And(a, b) => write!(f, "({a} & {b})"),
            LtlFormula::Or(a, b) => write!(f, "({a} | {b})"),
            LtlFormula::Next(a) => write!(f, "X ({a})"),
            LtlFormula::Until(a, b) => write!(f, "({a} U {b})"),
            LtlFormula::Release(a, b) => write!(f, "({a} R {b})"),
        }
    }
}

/// Collapse an InqLTL formula to its classical single-trace reading, in NNF.
pub fn collapse_to_ltl(f: &Formula) -> LtlFormula {
    collapse(f, true)
}

fn collapse(f: &Formula, positive: bool) -> LtlFormula {
    match &f.kind {
        FormulaKind::Bot => {
            if positive { LtlFormula::False } else { LtlFormula::True }
        }
        FormulaKind::Top => {
            if positive { LtlFormula::True } else { LtlFormula::False }
        }
        FormulaKind::Atom(p) => {
            if positive {
                LtlFormula::Prop(p.clone())
            } else {
                LtlFormula::NProp(p.clone())
            }
        }
        FormulaKind::BDis(a, b) => {
            if positive {
                LtlFormula::or(collapse(a, true), collapse(b, true))
            } else {
                LtlFormula::and(collapse(a, false), collapse(b, false))
            }
        }
        FormulaKind::Conj(a, b) => {
            if positive {
                LtlFormula::and(collapse(a, true), collapse(b, true))
            } else {
                LtlFormula::or(collapse(a, false), collapse(b, false))
            }
        }
        FormulaKind::Impl(a, b) => {
            if positive {
                LtlFormula::or(collapse(a, false), collapse(b, true))
            } else {
                LtlFormula::and(collapse(a, true), collapse(b, false))
            }
        }
        FormulaKind::Next(a) => LtlFormula::next(collapse(a, positive)),
        FormulaKind::Until(a, b) => {
            if positive {
                LtlFormula::until(collapse(a, true), collapse(b, true))
            } else {
                LtlFormula::release(collapse(a, false), collapse(b, false))
            }
        }
        FormulaKind::Release(a, b) => {
            if positive {
                LtlFormula::release(collapse(a, true), collapse(b, true))
            } else {
                LtlFormula::until(collapse(a, false), collapse(b, false))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    #[test]
    fn negation_dualizes_temporal_operators() {
        let f = parse("!(F p)", None).unwrap();
        assert_eq!(
            collapse_to_ltl(&f),
            LtlFormula::release(LtlFormula::False, LtlFormula::NProp("p".into())),
        );
    }

    #[test]
    fn implication_reads_materially() {
        let f = parse("p -> q", None).unwrap();
        assert_eq!(
            collapse_to_ltl(&f),
            LtlFormula::or(LtlFormula::NProp("p".into()), LtlFormula::Prop("q".into())),
        );
    }

    #[test]
    fn double_negation_vanishes_classically() {
        let f = parse("!!(p U q)", None).unwrap();
        assert_eq!(
            collapse_to_ltl(&f),
            LtlFormula::until(LtlFormula::Prop("p".into()), LtlFormula::Prop("q".into())),
        );
    }
}
