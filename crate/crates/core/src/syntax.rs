//! Text syntax for lattice terms.
//!
//! ```text
//! expr := term ('|' term)*
//! term := atom ('&' atom)*
//! atom := identifier | 'med(' expr ',' expr ',' expr ')'
//!       | 'M' digit '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! Variables are numbered in order of first appearance. `M<k>(...)` expands
//! to its join-of-meets form. Error positions are 1-based character offsets.

use crate::error::{Error, Result};
use crate::finite::LatticeTerm;

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedTerm {
    pub term: LatticeTerm,
    /// Variable names, indexed by the term's variable numbers.
    pub vars: Vec<String>,
}

impl ParsedTerm {
    pub fn to_source(&self) -> String {
        self.term.display_with(&self.vars).to_string()
    }
}

pub fn parse_term(src: &str) -> Result<ParsedTerm> {
    let mut p = Parser {
        chars: src.chars().collect(),
        at: 0,
        vars: Vec::new(),
    };
    let term = p.expr()?;
    p.skip_ws();
    if p.at < p.chars.len() {
        return Err(p.error(format!("unexpected {:?}", p.chars[p.at])));
    }
    Ok(ParsedTerm { term, vars: p.vars })
}

struct Parser {
    chars: Vec<char>,
    at: usize,
    vars: Vec<String>,
}

impl Parser {
    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.at + 1,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.at).is_some_and(|c| c.is_whitespace()) {
            self.at += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.at).copied()
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.at += 1;
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected {want:?}, found {c:?}"))),
            None => Err(self.error(format!("expected {want:?}, found end of input"))),
        }
    }

    fn expr(&mut self) -> Result<LatticeTerm> {
        let mut parts = vec![self.term()?];
        while self.peek() == Some('|') {
            self.at += 1;
            parts.push(self.term()?);
        }
        Ok(LatticeTerm::join(parts))
    }

    fn term(&mut self) -> Result<LatticeTerm> {
        let mut parts = vec![self.atom()?];
        while self.peek() == Some('&') {
            self.at += 1;
            parts.push(self.atom()?);
        }
        Ok(LatticeTerm::meet(parts))
    }

    fn args(&mut self) -> Result<Vec<LatticeTerm>> {
        self.expect('(')?;
        let mut args = vec![self.expr()?];
        while self.peek() == Some(',') {
            self.at += 1;
            args.push(self.expr()?);
        }
        self.expect(')')?;
        Ok(args)
    }

    fn atom(&mut self) -> Result<LatticeTerm> {
        match self.peek() {
            Some('(') => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.at;
                while self
                    .chars
                    .get(self.at)
                    .is_some_and(|c| c.is_alphanumeric() || *c == '_')
                {
                    self.at += 1;
                }
                let ident: String = self.chars[start..self.at].iter().collect();
                if self.peek() == Some('(') {
                    return self.call(&ident, start);
                }
                let index = match self.vars.iter().position(|v| *v == ident) {
                    Some(i) => i,
                    None => {
                        self.vars.push(ident);
                        self.vars.len() - 1
                    }
                };
                Ok(LatticeTerm::Var(index))
            }
            Some(c) => Err(self.error(format!("unexpected {c:?}"))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn call(&mut self, name: &str, start: usize) -> Result<LatticeTerm> {
        let k = match name.strip_prefix('M') {
            Some(d) if d.len() == 1 && d.chars().all(|c| c.is_ascii_digit()) => {
                Some(d.parse::<usize>().expect("digit"))
            }
            _ => None,
        };
        if name != "med" && k.is_none() {
            self.at = start;
            return Err(self.error(format!("unknown function {name:?}")));
        }
        let args = self.args()?;
        match k {
            None => {
                if args.len() != 3 {
                    return Err(Error::Syntax {
                        pos: start + 1,
                        msg: format!("med takes 3 arguments, got {}", args.len()),
                    });
                }
                let mut it = args.into_iter();
                let (x, y, z) = (it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
                Ok(LatticeTerm::median(x, y, z))
            }
            Some(k) => LatticeTerm::m_k(args, k),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::MonotoneNormalForm;
    use proptest::prelude::*;

    fn v(i: usize) -> LatticeTerm {
        LatticeTerm::Var(i)
    }

    #[test]
    fn median_normal_form() {
        let p = parse_term("med(a,b,c)").unwrap();
        assert_eq!(p.vars, ["a", "b", "c"]);
        let nf = p.term.normal_form(3).unwrap();
        assert_eq!(nf, MonotoneNormalForm::from_sets(3, vec![0b011, 0b101, 0b110]).unwrap());
        assert_eq!(nf.to_string(), "{{a,b},{a,c},{b,c}}");
    }

    #[test]
    fn precedence() {
        let p = parse_term("a & (b | c)").unwrap();
        assert_eq!(p.term, LatticeTerm::Meet(vec![v(0), LatticeTerm::Join(vec![v(1), v(2)])]));
        let p = parse_term("a & b | c").unwrap();
        assert_eq!(p.term, LatticeTerm::Join(vec![LatticeTerm::Meet(vec![v(0), v(1)]), v(2)]));
        let p = parse_term("x | x").unwrap();
        assert_eq!(p.vars, ["x"]);
    }

    #[test]
    fn order_statistics_expand() {
        let p = parse_term("M2(a, b, c)").unwrap();
        assert_eq!(p.term, LatticeTerm::m_k(vec![v(0), v(1), v(2)], 2).unwrap());
        let p = parse_term("M1(a,b) | M3(c,d,e)").unwrap();
        assert_eq!(p.vars.len(), 5);
        assert!(matches!(parse_term("M4(a,b)"), Err(Error::Argument(_))));
    }

    #[test]
    fn syntax_error_positions() {
        let pos = |s: &str| match parse_term(s) {
            Err(Error::Syntax { pos, .. }) => pos,
            other => panic!("expected syntax error for {s:?}, got {other:?}"),
        };
        assert_eq!(pos("M2(a,b"), 7);
        assert_eq!(pos("a &"), 4);
        assert_eq!(pos("a b"), 3);
        assert_eq!(pos("foo(a)"), 1);
        assert_eq!(pos("med(a,b)"), 1);
        assert_eq!(pos(""), 1);
        assert_eq!(pos("(a | b"), 7);
    }

    fn arb_term() -> impl Strategy<Value = LatticeTerm> {
        let leaf = (0usize..4).prop_map(LatticeTerm::Var);
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 2..4).prop_map(LatticeTerm::Meet),
                prop::collection::vec(inner, 2..4).prop_map(LatticeTerm::Join),
            ]
        })
    }

    /// Renumbers variables in order of first appearance, as the parser does.
    fn by_appearance(t: &LatticeTerm) -> LatticeTerm {
        fn walk(t: &LatticeTerm, seen: &mut Vec<usize>) -> LatticeTerm {
            match t {
                LatticeTerm::Var(i) => {
                    let j = seen.iter().position(|s| s == i).unwrap_or_else(|| {
                        seen.push(*i);
                        seen.len() - 1
                    });
                    LatticeTerm::Var(j)
                }
                LatticeTerm::Meet(c) => LatticeTerm::Meet(c.iter().map(|x| walk(x, seen)).collect()),
                LatticeTerm::Join(c) => LatticeTerm::Join(c.iter().map(|x| walk(x, seen)).collect()),
            }
        }
        walk(t, &mut Vec::new())
    }

    proptest! {
        #[test]
        fn print_then_parse_is_identity(t in arb_term()) {
            let t = by_appearance(&t);
            let parsed = parse_term(&t.to_string()).unwrap();
            prop_assert_eq!(&parsed.term, &t);
            prop_assert_eq!(parse_term(&parsed.to_source()).unwrap(), parsed);
        }
    }
}
