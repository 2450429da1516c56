use std::fmt;

use super::ast::Span;
use super::sugar;
use super::Formula;

/// Syntax error with the byte offset it was detected at.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError { offset, message: message.into() }
    }
}

/// Surface syntax tree: the core connectives plus all sugar forms, before
/// expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceFormula {
    pub kind: SurfaceKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurfaceKind {
    Bot,
    Top,
    Atom(String),
    BDis(Box<SurfaceFormula>, Box<SurfaceFormula>),
    Conj(Box<SurfaceFormula>, Box<SurfaceFormula>),
    Impl(Box<SurfaceFormula>, Box<SurfaceFormula>),
    Next(Box<SurfaceFormula>),
    Until(Box<SurfaceFormula>, Box<SurfaceFormula>),
    Release(Box<SurfaceFormula>, Box<SurfaceFormula>),
    Not(Box<SurfaceFormula>),
    Eventually(Box<SurfaceFormula>),
    Always(Box<SurfaceFormula>),
    /// Universal subteam quantifier `A f`, sugar for `top -> f`.
    Forall(Box<SurfaceFormula>),
    /// Universal singleton subteam quantifier `A1 f`, sugar for `!!f`.
    ForallSingle(Box<SurfaceFormula>),
    /// `card1`: teams of cardinality at most one; needs the declared alphabet.
    Card1,
    /// `dep(f1,...,fn; g)`.
    Dep(Vec<SurfaceFormula>, Box<SurfaceFormula>),
}

/// Parse a formula and expand all sugar into core form.
///
/// `ap` is the declared proposition alphabet; it is required to expand
/// `card1` and may be `None` when no structure is in play.
pub fn parse(text: &str, ap: Option<&[String]>) -> Result<Formula, ParseError> {
    let surface = parse_surface(text)?;
    sugar::expand_sugar(&surface, ap)
}

/// Parse to the surface tree without expanding sugar.
pub fn parse_surface(text: &str) -> Result<SurfaceFormula, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, pos: 0, len: text.len() };
    let formula = parser.formula()?;
    parser.expect_end()?;
    Ok(formula)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Bot,
    Top,
    Next,
    Eventually,
    Always,
    Until,
    Release,
    Forall,
    ForallSingle,
    Card1,
    Dep,
    Not,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
    Comma,
    Semi,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(name) => return write!(f, "identifier `{name}`"),
            Tok::Bot => "`bot`",
            Tok::Top => "`top`",
            Tok::Next => "`X`",
            Tok::Eventually => "`F`",
            Tok::Always => "`G`",
            Tok::Until => "`U`",
            Tok::Release => "`R`",
            Tok::Forall => "`A`",
            Tok::ForallSingle => "`A1`",
            Tok::Card1 => "`card1`",
            Tok::Dep => "`dep`",
            Tok::Not => "`!`",
            Tok::And => "`&`",
            Tok::Or => "`|`",
            Tok::Arrow => "`->`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::Comma => "`,`",
            Tok::Semi => "`;`",
        };
        f.write_str(s)
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'(' => { out.push((Tok::LParen, Span::new(i, i + 1))); i += 1 }
            b')' => { out.push((Tok::RParen, Span::new(i, i + 1))); i += 1 }
            b',' => { out.push((Tok::Comma, Span::new(i, i + 1))); i += 1 }
            b';' => { out.push((Tok::Semi, Span::new(i, i + 1))); i += 1 }
            b'!' => { out.push((Tok::Not, Span::new(i, i + 1))); i += 1 }
            b'&' => { out.push((Tok::And, Span::new(i, i + 1))); i += 1 }
            b'|' => { out.push((Tok::Or, Span::new(i, i + 1))); i += 1 }
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    out.push((Tok::Arrow, Span::new(i, i + 2)));
                    i += 2;
                } else {
                    return Err(ParseError::new(i, "expected `->` after `-`"));
                }
            }
            b'A'..=b'Z' | b'a'..=b'z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let word = &text[start..i];
                let span = Span::new(start, i);
                let tok = match word {
                    "bot" => Tok::Bot,
                    "top" => Tok::Top,
                    "X" => Tok::Next,
                    "F" => Tok::Eventually,
                    "G" => Tok::Always,
                    "U" => Tok::Until,
                    "R" => Tok::Release,
                    "A" => Tok::Forall,
                    "A1" => Tok::ForallSingle,
                    "card1" => Tok::Card1,
                    "dep" => Tok::Dep,
                    _ => Tok::Ident(word.to_string()),
                };
                out.push((tok, span));
            }
            _ => {
                return Err(ParseError::new(
                    i,
                    format!("unexpected character `{}`", text[i..].chars().next().unwrap()),
                ))
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(Tok, Span)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn next_span(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.len, |(_, s)| s.start)
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.tokens[self.pos].clone();
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<Span, ParseError> {
        match self.tokens.get(self.pos) {
            Some((t, span)) if *t == tok => {
                let span = *span;
                self.pos += 1;
                Ok(span)
            }
            Some((t, span)) => {
                Err(ParseError::new(span.start, format!("expected {tok}, found {t}")))
            }
            None => Err(ParseError::new(self.len, format!("expected {tok} at end of input"))),
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        match self.tokens.get(self.pos) {
            None => Ok(()),
            Some((t, span)) => {
                Err(ParseError::new(span.start, format!("unexpected {t} after formula")))
            }
        }
    }

    // Precedence, loosest first: `->` (right), `|`, `&`, `U`/`R` (right),
    // unary operators, primary.
    fn formula(&mut self) -> Result<SurfaceFormula, ParseError> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.bump();
            let rhs = self.formula()?;
            let span = lhs.span.join(rhs.span);
            return Ok(SurfaceFormula {
                kind: SurfaceKind::Impl(Box::new(lhs), Box::new(rhs)),
                span,
            });
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<SurfaceFormula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Tok::Or) {
            self.bump();
            let rhs = self.conjunction()?;
            let span = lhs.span.join(rhs.span);
            lhs = SurfaceFormula {
                kind: SurfaceKind::BDis(Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<SurfaceFormula, ParseError> {
        let mut lhs = self.temporal()?;
        while self.peek() == Some(&Tok::And) {
            self.bump();
            let rhs = self.temporal()?;
            let span = lhs.span.join(rhs.span);
            lhs = SurfaceFormula {
                kind: SurfaceKind::Conj(Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
        Ok(lhs)
    }

    fn temporal(&mut self) -> Result<SurfaceFormula, ParseError> {
        let lhs = self.unary()?;
        match self.peek() {
            Some(Tok::Until) => {
                self.bump();
                let rhs = self.temporal()?;
                let span = lhs.span.join(rhs.span);
                Ok(SurfaceFormula {
                    kind: SurfaceKind::Until(Box::new(lhs), Box::new(rhs)),
                    span,
                })
            }
            Some(Tok::Release) => {
                self.bump();
                let rhs = self.temporal()?;
                let span = lhs.span.join(rhs.span);
                Ok(SurfaceFormula {
                    kind: SurfaceKind::Release(Box::new(lhs), Box::new(rhs)),
                    span,
                })
            }
            _ => Ok(lhs),
        }
    }

    fn unary(&mut self) -> Result<SurfaceFormula, ParseError> {
        let make = |kind: fn(Box<SurfaceFormula>) -> SurfaceKind,
                    span: Span,
                    sub: SurfaceFormula| {
            let joined = span.join(sub.span);
            SurfaceFormula { kind: kind(Box::new(sub)), span: joined }
        };
        match self.peek() {
            Some(Tok::Not) => {
                let (_, span) = self.bump();
                Ok(make(SurfaceKind::Not, span, self.unary()?))
            }
            Some(Tok::Next) => {
                let (_, span) = self.bump();
                Ok(make(SurfaceKind::Next, span, self.unary()?))
            }
            Some(Tok::Eventually) => {
                let (_, span) = self.bump();
                Ok(make(SurfaceKind::Eventually, span, self.unary()?))
            }
            Some(Tok::Always) => {
                let (_, span) = self.bump();
                Ok(make(SurfaceKind::Always, span, self.unary()?))
            }
            Some(Tok::Forall) => {
                let (_, span) = self.bump();
                Ok(make(SurfaceKind::Forall, span, self.unary()?))
            }
            Some(Tok::ForallSingle) => {
                let (_, span) = self.bump();
                Ok(make(SurfaceKind::ForallSingle, span, self.unary()?))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<SurfaceFormula, ParseError> {
        match self.tokens.get(self.pos).cloned() {
            Some((Tok::Bot, span)) => {
                self.pos += 1;
                Ok(SurfaceFormula { kind: SurfaceKind::Bot, span })
            }
            Some((Tok::Top, span)) => {
                self.pos += 1;
                Ok(SurfaceFormula { kind: SurfaceKind::Top, span })
            }
            Some((Tok::Card1, span)) => {
                self.pos += 1;
                Ok(SurfaceFormula { kind: SurfaceKind::Card1, span })
            }
            Some((Tok::Ident(name), span)) => {
                self.pos += 1;
                Ok(SurfaceFormula { kind: SurfaceKind::Atom(name), span })
            }
            Some((Tok::Dep, span)) => {
                self.pos += 1;
                self.dep_tail(span)
            }
            Some((Tok::LParen, _)) => {
                self.pos += 1;
                let inner = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Some((t, span)) => {
                Err(ParseError::new(span.start, format!("expected a formula, found {t}")))
            }
            None => Err(ParseError::new(self.len, "expected a formula at end of input")),
        }
    }

    fn dep_tail(&mut self, dep_span: Span) -> Result<SurfaceFormula, ParseError> {
        self.expect(Tok::LParen)?;
        if self.peek() == Some(&Tok::Semi) {
            return Err(ParseError::new(
                self.next_span(),
                "dep(...) needs at least one determining formula before `;`",
            ));
        }
        let mut args = vec![self.formula()?];
        loop {
            match self.peek() {
                Some(Tok::Comma) => {
                    self.bump();
                    args.push(self.formula()?);
                }
                Some(Tok::Semi) => {
                    self.bump();
                    break;
                }
                _ => {
                    return Err(ParseError::new(
                        self.next_span(),
                        "expected `,` or `;` in dep(...)",
                    ))
                }
            }
        }
        if self.peek() == Some(&Tok::RParen) {
            return Err(ParseError::new(
                self.next_span(),
                "dep(...) has an empty determined slot after `;`",
            ));
        }
        let body = self.formula()?;
        let close = self.expect(Tok::RParen)?;
        Ok(SurfaceFormula {
            kind: SurfaceKind::Dep(args, Box::new(body)),
            span: dep_span.join(close),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::FormulaKind;

    #[test]
    fn parses_constants_and_atoms() {
        assert_eq!(parse("bot", None).unwrap(), Formula::bot());
        assert_eq!(parse("top", None).unwrap(), Formula::top());
        assert_eq!(parse("req_0", None).unwrap(), Formula::atom("req_0"));
    }

    #[test]
    fn response_formula_shape() {
        // G (q -> F p) expands to bot R (q -> (top U p)).
        let f = parse("G (q -> F p)", None).unwrap();
        let expected = Formula::always(Formula::impl_(
            Formula::atom("q"),
            Formula::eventually(Formula::atom("p")),
        ));
        assert_eq!(f, expected);
    }

    #[test]
    fn truncated_input_is_an_error() {
        let err = parse("p ->", None).unwrap_err();
        assert_eq!(err.offset, 4);
    }

    #[test]
    fn precedence_arrow_loosest_unary_tightest() {
        assert_eq!(
            parse("F p -> G q", None).unwrap(),
            Formula::impl_(
                Formula::eventually(Formula::atom("p")),
                Formula::always(Formula::atom("q")),
            )
        );
        // X binds tighter than U; & tighter than |; U tighter than &.
        assert_eq!(
            parse("X p U q", None).unwrap(),
            Formula::until(Formula::next(Formula::atom("p")), Formula::atom("q"))
        );
        assert_eq!(
            parse("a | b & c", None).unwrap(),
            Formula::bdis(Formula::atom("a"), Formula::conj(Formula::atom("b"), Formula::atom("c")))
        );
        assert_eq!(
            parse("a & b U c", None).unwrap(),
            Formula::conj(Formula::atom("a"), Formula::until(Formula::atom("b"), Formula::atom("c")))
        );
    }

    #[test]
    fn arrow_and_until_are_right_associative() {
        assert_eq!(
            parse("a -> b -> c", None).unwrap(),
            Formula::impl_(
                Formula::atom("a"),
                Formula::impl_(Formula::atom("b"), Formula::atom("c")),
            )
        );
        assert_eq!(
            parse("a U b U c", None).unwrap(),
            Formula::until(
                Formula::atom("a"),
                Formula::until(Formula::atom("b"), Formula::atom("c")),
            )
        );
    }

    #[test]
    fn dep_needs_both_slots() {
        assert!(parse("dep(; b)", None).is_err());
        assert!(parse("dep(a;)", None).is_err());
        assert!(parse("dep(a; b)", None).is_ok());
        assert!(parse("dep(a, c; b)", None).is_ok());
    }

    #[test]
    fn keywords_are_not_atoms() {
        // `U` alone is an operator, not an atom.
        assert!(parse("U", None).is_err());
        let f = parse("A (p -> bot)", None).unwrap();
        match &f.kind {
            FormulaKind::Impl(lhs, _) => assert_eq!(lhs.kind, FormulaKind::Top),
            other => panic!("expected top -> _, got {other:?}"),
        }
    }

    #[test]
    fn spans_point_into_source() {
        let surface = parse_surface("p & (q | !q)").unwrap();
        assert_eq!(surface.span, Span::new(0, 11));
    }
}
