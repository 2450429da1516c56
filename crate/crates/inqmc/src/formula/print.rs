use super::{Formula, FormulaKind};

/// Pretty-print a core formula with minimal parentheses.
///
/// Negations, `F`, and `G` are re-sugared (`p -> bot` prints as `!p`,
/// `top U p` as `F p`, `bot R p` as `G p`), so the output parses back to a
/// structurally identical formula.
pub fn pretty(f: &Formula) -> String {
    let mut out = String::new();
    write_at(f, 0, &mut out);
    out
}

// Binding levels, loosest first: 0 `->`, 1 `|`, 2 `&`, 3 `U`/`R`,
// 4 unary, 5 atoms and constants.
fn level(f: &Formula) -> u8 {
    match &f.kind {
        FormulaKind::Impl(_, rhs) if matches!(rhs.kind, FormulaKind::Bot) => 4,
        FormulaKind::Impl(..) => 0,
        FormulaKind::BDis(..) => 1,
        FormulaKind::Conj(..) => 2,
        FormulaKind::Until(lhs, _) if matches!(lhs.kind, FormulaKind::Top) => 4,
        FormulaKind::Release(lhs, _) if matches!(lhs.kind, FormulaKind::Bot) => 4,
        FormulaKind::Until(..) | FormulaKind::Release(..) => 3,
        FormulaKind::Next(..) => 4,
        FormulaKind::Bot | FormulaKind::Top | FormulaKind::Atom(_) => 5,
    }
}

fn write_at(f: &Formula, min: u8, out: &mut String) {
    if level(f) < min {
        out.push('(');
        write_at(f, 0, out);
        out.push(')');
        return;
    }
    match &f.kind {
        FormulaKind::Bot => out.push_str("bot"),
        FormulaKind::Top => out.push_str("top"),
        FormulaKind::Atom(name) => out.push_str(name),
        FormulaKind::Impl(lhs, rhs) if matches!(rhs.kind, FormulaKind::Bot) => {
            out.push('!');
            write_at(lhs, 4, out);
        }
        FormulaKind::Impl(lhs, rhs) => {
            write_at(lhs, 1, out);
            out.push_str(" -> ");
            write_at(rhs, 0, out);
        }
        FormulaKind::BDis(lhs, rhs) => {
            write_at(lhs, 1, out);
            out.push_str(" | ");
            write_at(rhs, 2, out);
        }
        FormulaKind::Conj(lhs, rhs) => {
            write_at(lhs, 2, out);
            out.push_str(" & ");
            write_at(rhs, 3, out);
        }
        FormulaKind::Until(lhs, rhs) if matches!(lhs.kind, FormulaKind::Top) => {
            out.push_str("F ");
            write_at(rhs, 4, out);
        }
        FormulaKind::Release(lhs, rhs) if matches!(lhs.kind, FormulaKind::Bot) => {
            out.push_str("G ");
            write_at(rhs, 4, out);
        }
        FormulaKind::Until(lhs, rhs) => {
            write_at(lhs, 4, out);
            out.push_str(" U ");
            write_at(rhs, 3, out);
        }
        FormulaKind::Release(lhs, rhs) => {
            write_at(lhs, 4, out);
            out.push_str(" R ");
            write_at(rhs, 3, out);
        }
        FormulaKind::Next(sub) => {
            out.push_str("X ");
            write_at(sub, 4, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    #[test]
    fn constants_and_negation() {
        assert_eq!(pretty(&Formula::bot()), "bot");
        assert_eq!(pretty(&Formula::neg(Formula::atom("p"))), "!p");
    }

    #[test]
    fn resugars_temporal_shorthands() {
        let f = parse("G (q -> F p)", None).unwrap();
        assert_eq!(pretty(&f), "G (q -> F p)");
    }

    #[test]
    fn keeps_structure_under_round_trip() {
        for text in [
            "a -> b -> c",
            "(a -> b) -> c",
            "a | (b | c)",
            "a & b | c & d",
            "!(a & b) U X !c",
            "p U (q R r)",
            "(p U q) R r",
            "top -> (bot | !!x)",
        ] {
            let f = parse(text, None).unwrap();
            let printed = pretty(&f);
            let reparsed = parse(&printed, None).unwrap();
            assert_eq!(f, reparsed, "round trip changed `{text}` -> `{printed}`");
        }
    }
}
