use super::ast::Span;
use super::{Formula, FormulaKind};

/// Fragment membership of a core formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FragmentReport {
    /// Positive fragment: `bot | top | p | !p | f|f | f&f | X | U | R`.
    pub is_positive: bool,
    /// Left-positive fragment: unrestricted `!x`, implications only with
    /// positive antecedents. Subsumes the positive fragment.
    pub is_left_positive: bool,
    /// Nesting depth of `->`, not counting negation-shaped implications.
    pub implication_depth: u32,
    /// First implication antecedent that breaks left-positivity, if any.
    pub offending: Option<OffendingSubformula>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OffendingSubformula {
    pub pretty: String,
    pub span: Option<Span>,
}

/// Classify a core formula into the paper's fragments.
pub fn classify(f: &Formula) -> FragmentReport {
    let mut offending = None;
    let is_left_positive = left_positive(f, &mut offending);
    FragmentReport {
        is_positive: positive(f),
        is_left_positive,
        implication_depth: depth(f),
        offending,
    }
}

fn positive(f: &Formula) -> bool {
    match &f.kind {
        FormulaKind::Bot | FormulaKind::Top | FormulaKind::Atom(_) => true,
        FormulaKind::BDis(a, b)
        | FormulaKind::Conj(a, b)
        | FormulaKind::Until(a, b)
        | FormulaKind::Release(a, b) => positive(a) && positive(b),
        FormulaKind::Next(a) => positive(a),
        // The only implication the positive grammar admits is the literal !p.
        FormulaKind::Impl(lhs, rhs) => {
            matches!(rhs.kind, FormulaKind::Bot) && matches!(lhs.kind, FormulaKind::Atom(_))
        }
    }
}

fn left_positive(f: &Formula, offending: &mut Option<OffendingSubformula>) -> bool {
    match &f.kind {
        FormulaKind::Bot | FormulaKind::Top | FormulaKind::Atom(_) => true,
        FormulaKind::BDis(a, b)
        | FormulaKind::Conj(a, b)
        | FormulaKind::Until(a, b)
        | FormulaKind::Release(a, b) => {
            left_positive(a, offending) && left_positive(b, offending)
        }
        FormulaKind::Next(a) => left_positive(a, offending),
        // !x is allowed for arbitrary x.
        FormulaKind::Impl(_, rhs) if matches!(rhs.kind, FormulaKind::Bot) => true,
        FormulaKind::Impl(lhs, rhs) => {
            if !positive(lhs) {
                if offending.is_none() {
                    *offending = Some(OffendingSubformula {
                        pretty: lhs.to_string(),
                        span: lhs.span,
                    });
                }
                left_positive(rhs, offending);
                false
            } else {
                left_positive(rhs, offending)
            }
        }
    }
}

fn depth(f: &Formula) -> u32 {
    match &f.kind {
        FormulaKind::Bot | FormulaKind::Top | FormulaKind::Atom(_) => 0,
        FormulaKind::Next(a) => depth(a),
        FormulaKind::BDis(a, b)
        | FormulaKind::Conj(a, b)
        | FormulaKind::Until(a, b)
        | FormulaKind::Release(a, b) => depth(a).max(depth(b)),
        // Negations are not counted; anything else with -> at the root is.
        FormulaKind::Impl(lhs, rhs) if matches!(rhs.kind, FormulaKind::Bot) => depth(lhs),
        FormulaKind::Impl(lhs, rhs) => 1 + depth(lhs).max(depth(rhs)),
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn report(text: &str) -> FragmentReport {
        classify(&parse(text, None).unwrap())
    }

    #[test]
    fn observational_determinism_is_left_positive_depth_one() {
        let r = report("(li | !li) -> G (lo | !lo)");
        assert!(!r.is_positive);
        assert!(r.is_left_positive);
        assert_eq!(r.implication_depth, 1);
    }

    #[test]
    fn double_negation_antecedent_is_rejected() {
        let r = report("(!!(F p)) -> F p");
        assert!(!r.is_left_positive);
        assert_eq!(r.implication_depth, 1);
        assert_eq!(r.offending.as_ref().unwrap().pretty, "!!F p");
    }

    #[test]
    fn positive_grammar_admits_negated_atoms() {
        let r = report("p & (q | !q)");
        assert!(r.is_positive);
        assert!(r.is_left_positive);
        assert_eq!(r.implication_depth, 0);
    }

    #[test]
    fn forall_counts_inner_negation_does_not() {
        let r = report("A (p -> bot)");
        assert!(r.is_left_positive);
        assert_eq!(r.implication_depth, 1);
    }

    #[test]
    fn negation_is_left_positive_for_arbitrary_bodies() {
        // The body is itself not left-positive, but under ! that is fine.
        let r = report("!((!!p) -> p)");
        assert!(r.is_left_positive);
        assert_eq!(r.implication_depth, 1);
    }

    #[test]
    fn nested_counted_implications_accumulate() {
        let r = report("p -> (q -> F p)");
        assert_eq!(r.implication_depth, 2);
        let r = report("(p -> q) & (q -> p)");
        assert_eq!(r.implication_depth, 1);
    }

    #[test]
    fn depth_zero_implies_left_positive() {
        for text in ["!(F p & !q)", "G (p | !p)", "!!(X p)", "p U !p"] {
            let r = report(text);
            assert_eq!(r.implication_depth, 0);
            assert!(r.is_left_positive, "{text}");
        }
    }
}
