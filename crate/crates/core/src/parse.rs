//! Reader for the prefix formula syntax.
//!
//! ```text
//! formula := VAR | NAME "(" formula ("," formula)* ")" | NAME
//! ```
//!
//! A name is a connective iff the signature declares it; every other name
//! is a variable. Whitespace is insignificant.

use crate::error::{ParseError, ParseErrorKind};
use crate::formula::{Formula, Name, Signature};

type ParseResult<T> = Result<T, ParseError>;

pub fn parse_formula(text: &str, sig: &Signature) -> ParseResult<Formula> {
    let mut p = Parser::new(text, sig);
    let f = p.formula()?;
    p.skip_ws();
    if p.pos < p.bytes.len() {
        return Err(p.error(ParseErrorKind::Syntax("trailing input".into())));
    }
    Ok(f)
}

/// Comma-separated formulas at top level; blank input is the empty list.
pub fn parse_formula_list(text: &str, sig: &Signature) -> ParseResult<Vec<Formula>> {
    let mut p = Parser::new(text, sig);
    p.skip_ws();
    if p.pos == p.bytes.len() {
        return Ok(Vec::new());
    }
    let mut out = vec![p.formula()?];
    loop {
        p.skip_ws();
        match p.peek() {
            None => return Ok(out),
            Some(b',') => {
                p.pos += 1;
                out.push(p.formula()?);
            }
            Some(_) => return Err(p.error(ParseErrorKind::Syntax("expected `,`".into()))),
        }
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    text: &'a str,
    pos: usize,
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, sig: &'a Signature) -> Self {
        Self {
            bytes: text.as_bytes(),
            text,
            pos: 0,
            sig,
        }
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            position: self.pos,
            kind,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn name(&mut self) -> ParseResult<&'a str> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(b) if b.is_ascii_alphabetic() || b == b'_' => self.pos += 1,
            Some(b) => {
                return Err(self.error(ParseErrorKind::Syntax(format!(
                    "unexpected `{}`",
                    b as char
                ))))
            }
            None => {
                return Err(self.error(ParseErrorKind::Syntax("unexpected end of input".into())))
            }
        }
        while self
            .peek()
            .is_some_and(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'\'')
        {
            self.pos += 1;
        }
        Ok(&self.text[start..self.pos])
    }

    fn formula(&mut self) -> ParseResult<Formula> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let name = self.name()?;
        self.skip_ws();
        let declared = self.sig.arity(name);
        if self.peek() != Some(b'(') {
            return match declared {
                None => Ok(Formula::Var(Name::from(name))),
                Some(0) => Ok(Formula::App(Name::from(name), Vec::new())),
                Some(expected) => Err(ParseError {
                    position: start,
                    kind: ParseErrorKind::ArityMismatch {
                        connective: name.to_string(),
                        expected,
                        found: 0,
                    },
                }),
            };
        }
        let Some(expected) = declared else {
            return Err(ParseError {
                position: start,
                kind: ParseErrorKind::UnknownConnective(name.to_string()),
            });
        };
        self.pos += 1;
        let mut args = vec![self.formula()?];
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                    args.push(self.formula()?);
                }
                Some(b')') => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.error(ParseErrorKind::Syntax("expected `,` or `)`".into()))),
            }
        }
        if args.len() != expected {
            return Err(ParseError {
                position: start,
                kind: ParseErrorKind::ArityMismatch {
                    connective: name.to_string(),
                    expected,
                    found: args.len(),
                },
            });
        }
        Ok(Formula::App(Name::from(name), args))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::new([("and", 2), ("or", 2), ("not", 1), ("top", 0)]).unwrap()
    }

    #[test]
    fn reads_nested_applications() {
        let f = parse_formula("and(x, or(x, y))", &sig()).unwrap();
        let expected = Formula::app(
            "and",
            vec![
                Formula::var("x"),
                Formula::app("or", vec![Formula::var("x"), Formula::var("y")]),
            ],
        );
        assert_eq!(f, expected);
        assert_eq!(f.to_string(), "and(x, or(x, y))");

        let nn = parse_formula("not(not(x))", &sig()).unwrap();
        assert_eq!(nn.depth(), 2);
    }

    #[test]
    fn whitespace_is_insignificant() {
        let a = parse_formula("  and ( x ,or(x,y) ) ", &sig()).unwrap();
        let b = parse_formula("and(x,or(x,y))", &sig()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn constants_and_primed_variables() {
        let f = parse_formula("and(top, y'1)", &sig()).unwrap();
        assert_eq!(f.to_string(), "and(top, y'1)");
        assert_eq!(f.vars().len(), 1);
    }

    #[test]
    fn arity_mismatch() {
        let err = parse_formula("and(x)", &sig()).unwrap_err();
        assert!(matches!(
            err.kind,
            ParseErrorKind::ArityMismatch {
                expected: 2,
                found: 1,
                ..
            }
        ));
        let err = parse_formula("not", &sig()).unwrap_err();
        assert!(matches!(
            err.kind,
            ParseErrorKind::ArityMismatch { found: 0, .. }
        ));
        let err = parse_formula("top(x)", &sig()).unwrap_err();
        assert!(matches!(
            err.kind,
            ParseErrorKind::ArityMismatch { expected: 0, .. }
        ));
    }

    #[test]
    fn unknown_connective_and_syntax_errors() {
        let err = parse_formula("imp(x, y)", &sig()).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownConnective("imp".into()));
        assert_eq!(err.position, 0);

        let err = parse_formula("and(x, y", &sig()).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));
        assert_eq!(err.position, 8);

        assert!(parse_formula("x y", &sig()).is_err());
        assert!(parse_formula("", &sig()).is_err());
    }

    #[test]
    fn lists() {
        let v = parse_formula_list("x, not(x)", &sig()).unwrap();
        assert_eq!(v.len(), 2);
        assert!(parse_formula_list("   ", &sig()).unwrap().is_empty());
        let v = parse_formula_list("and(x,y),or(y,z) , z", &sig()).unwrap();
        assert_eq!(v.len(), 3);
        assert!(parse_formula_list("x,,y", &sig()).is_err());
    }
}
