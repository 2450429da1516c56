use super::ast::Span;
use super::parse::{ParseError, SurfaceFormula, SurfaceKind};
use super::{Formula, FormulaKind};

/// Expand all sugar in a surface tree into core form.
///
/// Expansions: `F f = top U f`, `G f = bot R f`, `!f = f -> bot`,
/// `A f = top -> f`, `A1 f = !!f`, `card1 = AND_p G (p | !p)` over the
/// declared alphabet, and `dep(f1,...,fn; g)` as
/// `[AND_i (!fi | !!fi)] -> (!g | !!g)`.
///
/// Expanded nodes carry the span of the surface construct they came from.
pub fn expand_sugar(
    surface: &SurfaceFormula,
    ap: Option<&[String]>,
) -> Result<Formula, ParseError> {
    let span = Some(surface.span);
    let kind = match &surface.kind {
        SurfaceKind::Bot => FormulaKind::Bot,
        SurfaceKind::Top => FormulaKind::Top,
        SurfaceKind::Atom(name) => FormulaKind::Atom(name.clone()),
        SurfaceKind::BDis(a, b) => FormulaKind::BDis(
            Box::new(expand_sugar(a, ap)?),
            Box::new(expand_sugar(b, ap)?),
        ),
        SurfaceKind::Conj(a, b) => FormulaKind::Conj(
            Box::new(expand_sugar(a, ap)?),
            Box::new(expand_sugar(b, ap)?),
        ),
        SurfaceKind::Impl(a, b) => FormulaKind::Impl(
            Box::new(expand_sugar(a, ap)?),
            Box::new(expand_sugar(b, ap)?),
        ),
        SurfaceKind::Next(a) => FormulaKind::Next(Box::new(expand_sugar(a, ap)?)),
        SurfaceKind::Until(a, b) => FormulaKind::Until(
            Box::new(expand_sugar(a, ap)?),
            Box::new(expand_sugar(b, ap)?),
        ),
        SurfaceKind::Release(a, b) => FormulaKind::Release(
            Box::new(expand_sugar(a, ap)?),
            Box::new(expand_sugar(b, ap)?),
        ),
        SurfaceKind::Not(a) => {
            FormulaKind::Impl(Box::new(expand_sugar(a, ap)?), Box::new(spanned(FormulaKind::Bot, span)))
        }
        SurfaceKind::Eventually(a) => FormulaKind::Until(
            Box::new(spanned(FormulaKind::Top, span)),
            Box::new(expand_sugar(a, ap)?),
        ),
        SurfaceKind::Always(a) => FormulaKind::Release(
            Box::new(spanned(FormulaKind::Bot, span)),
            Box::new(expand_sugar(a, ap)?),
        ),
        SurfaceKind::Forall(a) => FormulaKind::Impl(
            Box::new(spanned(FormulaKind::Top, span)),
            Box::new(expand_sugar(a, ap)?),
        ),
        SurfaceKind::ForallSingle(a) => {
            let inner = expand_sugar(a, ap)?;
            let once = spanned(
                FormulaKind::Impl(Box::new(inner), Box::new(spanned(FormulaKind::Bot, span))),
                span,
            );
            FormulaKind::Impl(Box::new(once), Box::new(spanned(FormulaKind::Bot, span)))
        }
        SurfaceKind::Card1 => {
            let ap = ap.ok_or_else(|| ParseError {
                offset: surface.span.start,
                message: "card1 needs a declared proposition alphabet (load a structure)"
                    .to_string(),
            })?;
            let mut conjuncts = ap.iter().map(|p| {
                let atom = || spanned(FormulaKind::Atom(p.clone()), span);
                let not_atom = spanned(
                    FormulaKind::Impl(Box::new(atom()), Box::new(spanned(FormulaKind::Bot, span))),
                    span,
                );
                spanned(
                    FormulaKind::Release(
                        Box::new(spanned(FormulaKind::Bot, span)),
                        Box::new(spanned(
                            FormulaKind::BDis(Box::new(atom()), Box::new(not_atom)),
                            span,
                        )),
                    ),
                    span,
                )
            });
            match conjuncts.next() {
                None => FormulaKind::Top,
                Some(first) => {
                    return Ok(conjuncts.fold(first, |acc, c| {
                        spanned(FormulaKind::Conj(Box::new(acc), Box::new(c)), span)
                    }))
                }
            }
        }
        SurfaceKind::Dep(args, body) => {
            let uniform = |f: Formula| -> Formula {
                // !f | !!f: the truth value of f is uniform across the team.
                let not = spanned(
                    FormulaKind::Impl(Box::new(f), Box::new(spanned(FormulaKind::Bot, span))),
                    span,
                );
                let not_not = spanned(
                    FormulaKind::Impl(
                        Box::new(not.clone()),
                        Box::new(spanned(FormulaKind::Bot, span)),
                    ),
                    span,
                );
                spanned(FormulaKind::BDis(Box::new(not), Box::new(not_not)), span)
            };
            let mut antecedent: Option<Formula> = None;
            for arg in args {
                let u = uniform(expand_sugar(arg, ap)?);
                antecedent = Some(match antecedent {
                    None => u,
                    Some(acc) => spanned(FormulaKind::Conj(Box::new(acc), Box::new(u)), span),
                });
            }
            let antecedent = antecedent.expect("parser guarantees at least one dep argument");
            let consequent = uniform(expand_sugar(body, ap)?);
            FormulaKind::Impl(Box::new(antecedent), Box::new(consequent))
        }
    };
    Ok(spanned(kind, span))
}

fn spanned(kind: FormulaKind, span: Option<Span>) -> Formula {
    Formula::with_span(kind, span)
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    #[test]
    fn eventually_is_top_until() {
        assert_eq!(
            parse("F p", None).unwrap(),
            parse("top U p", None).unwrap(),
        );
    }

    #[test]
    fn forall_single_is_double_negation() {
        assert_eq!(
            parse("A1 (F p)", None).unwrap(),
            parse("((F p) -> bot) -> bot", None).unwrap(),
        );
    }

    #[test]
    fn dep_matches_inquisitive_encoding() {
        assert_eq!(
            parse("dep(a; b)", None).unwrap(),
            parse(
                "((a -> bot) | ((a -> bot) -> bot)) -> ((b -> bot) | ((b -> bot) -> bot))",
                None
            )
            .unwrap(),
        );
    }

    #[test]
    fn card1_expands_over_alphabet() {
        let ap = vec!["p".to_string(), "q".to_string()];
        assert_eq!(
            parse("card1", Some(&ap)).unwrap(),
            parse("(G (p | !p)) & (G (q | !q))", None).unwrap(),
        );
        assert!(parse("card1", None).is_err());
    }

    #[test]
    fn forall_counts_as_implication_from_top() {
        assert_eq!(
            parse("A F p", None).unwrap(),
            parse("top -> F p", None).unwrap(),
        );
    }
}
