use super::{
    and, edge, eq, exists_unique, implies, not, or, Dialect, DistCmp, Formula, EDGE,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(u32),
    LParen,
    RParen,
    Comma,
    Dot,
    Eq,
    Neq,
    Le,
    And,
    Or,
    Imp,
    Iff,
    Bang,
}

struct Lexed {
    toks: Vec<(Tok, usize, usize)>,
    end: (usize, usize),
}

fn lex(text: &str) -> Result<Lexed> {
    let mut toks = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let at = (line, col);
        let mut adv = 1;
        let tok = match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            c if c.is_whitespace() => None,
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            '=' => Some(Tok::Eq),
            '&' => Some(Tok::And),
            '|' => Some(Tok::Or),
            '!' if chars.get(i + 1) == Some(&'=') => {
                adv = 2;
                Some(Tok::Neq)
            }
            '!' => Some(Tok::Bang),
            '<' if chars.get(i + 1) == Some(&'=') => {
                adv = 2;
                Some(Tok::Le)
            }
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                adv = 3;
                Some(Tok::Iff)
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                adv = 2;
                Some(Tok::Imp)
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let s: String = chars[i..j].iter().collect();
                adv = j - i;
                Some(Tok::Int(s.parse().map_err(|_| Error::Parse {
                    line,
                    col,
                    msg: format!("integer `{s}` too large"),
                })?))
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                // `exists!` is one keyword
                let mut s: String = chars[i..j].iter().collect();
                if s == "exists" && chars.get(j) == Some(&'!') && chars.get(j + 1) != Some(&'=') {
                    s.push('!');
                    j += 1;
                }
                adv = j - i;
                Some(Tok::Ident(s))
            }
            other => {
                return Err(Error::Parse { line, col, msg: format!("unexpected character `{other}`") });
            }
        };
        if let Some(t) = tok {
            toks.push((t, at.0, at.1));
        }
        i += adv;
        col += adv;
    }
    Ok(Lexed { toks, end: (line, col) })
}

struct Parser {
    lx: Lexed,
    pos: usize,
    dialect: Dialect,
}

const KEYWORDS: &[&str] = &["exists", "forall", "exists!", "existsS", "forallS", "in", "true", "false", "dist", "deg"];

fn is_set_var(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_uppercase())
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.lx.toks.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> (usize, usize) {
        self.lx.toks.get(self.pos).map(|t| (t.1, t.2)).unwrap_or(self.lx.end)
    }

    fn fail<T>(&self, expected: &str) -> Result<T> {
        let (line, col) = self.here();
        let found = match self.peek() {
            Some(t) => format!("{t:?}"),
            None => "end of input".into(),
        };
        Err(Error::Parse { line, col, msg: format!("expected {expected}, found {found}") })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.fail(what)
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.fail(what),
        }
    }

    fn elem_var(&mut self) -> Result<String> {
        let at = self.pos;
        let v = self.ident("element variable")?;
        if is_set_var(&v) {
            self.pos = at;
            return self.fail("element variable (lowercase)");
        }
        Ok(v)
    }

    fn int(&mut self) -> Result<u32> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => self.fail("integer"),
        }
    }

    fn expr(&mut self) -> Result<Formula> {
        let lhs = self.imp()?;
        if self.eat(&Tok::Iff) {
            let rhs = self.expr()?;
            return Ok(Formula::Iff(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula> {
        let lhs = self.disj()?;
        if self.eat(&Tok::Imp) {
            let rhs = self.imp()?;
            return Ok(implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Formula> {
        let mut parts = vec![self.conj()?];
        while self.eat(&Tok::Or) {
            parts.push(self.conj()?);
        }
        Ok(if parts.len() == 1 { parts.pop().expect("one") } else { or(parts) })
    }

    fn conj(&mut self) -> Result<Formula> {
        let mut parts = vec![self.unary()?];
        while self.eat(&Tok::And) {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().expect("one") } else { and(parts) })
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat(&Tok::Bang) {
            return Ok(not(self.unary()?));
        }
        self.primary()
    }

    fn quantifier(&mut self, kw: &str) -> Result<Formula> {
        let set = kw.ends_with('S');
        if set && self.dialect == Dialect::Fo {
            let (line, col) = self.here();
            let _ = (line, col);
            return Err(Error::Dialect(kw.to_string()));
        }
        let v = if set {
            let at = self.pos;
            let v = self.ident("set variable")?;
            if !is_set_var(&v) {
                self.pos = at;
                return self.fail("set variable (uppercase)");
            }
            v
        } else {
            self.elem_var()?
        };
        self.expect(Tok::Dot, "`.`")?;
        let body = Box::new(self.expr()?);
        Ok(match kw {
            "exists" => Formula::Exists(v, body),
            "forall" => Formula::Forall(v, body),
            "exists!" => exists_unique(&v, *body),
            "existsS" => Formula::ExistsSet(v, body),
            _ => Formula::ForallSet(v, body),
        })
    }

    fn primary(&mut self) -> Result<Formula> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Ident(kw)) if ["exists", "forall", "exists!", "existsS", "forallS"].contains(&kw.as_str()) => {
                self.pos += 1;
                self.quantifier(&kw)
            }
            Some(Tok::Ident(kw)) if kw == "true" || kw == "false" => {
                self.pos += 1;
                Ok(if kw == "true" { Formula::True } else { Formula::False })
            }
            Some(Tok::Ident(kw)) if kw == "dist" => {
                self.pos += 1;
                self.expect(Tok::LParen, "`(`")?;
                let x = self.elem_var()?;
                self.expect(Tok::Comma, "`,`")?;
                let y = self.elem_var()?;
                self.expect(Tok::RParen, "`)`")?;
                let cmp = if self.eat(&Tok::Eq) {
                    DistCmp::Eq
                } else if self.eat(&Tok::Le) {
                    DistCmp::Le
                } else {
                    return self.fail("`=` or `<=`");
                };
                Ok(Formula::Dist(x, y, cmp, self.int()?))
            }
            Some(Tok::Ident(kw)) if kw == "deg" => {
                self.pos += 1;
                self.expect(Tok::LParen, "`(`")?;
                let x = self.elem_var()?;
                self.expect(Tok::RParen, "`)`")?;
                self.expect(Tok::Eq, "`=`")?;
                Ok(Formula::Deg(x, self.int()?))
            }
            Some(Tok::Ident(name)) if !KEYWORDS.contains(&name.as_str()) => {
                self.pos += 1;
                if self.eat(&Tok::LParen) {
                    let x = self.elem_var()?;
                    if self.eat(&Tok::Comma) {
                        let y = self.elem_var()?;
                        self.expect(Tok::RParen, "`)`")?;
                        return Ok(if name == "E" { edge(&x, &y) } else { Formula::Rel(name, x, y) });
                    }
                    self.expect(Tok::RParen, "`,` or `)`")?;
                    if name == "E" || name == EDGE {
                        return self.fail("second argument of the edge relation");
                    }
                    return Ok(Formula::Label(name, x));
                }
                if is_set_var(&name) {
                    self.pos -= 1;
                    return self.fail("element variable (lowercase)");
                }
                if self.eat(&Tok::Eq) {
                    return Ok(eq(&name, &self.elem_var()?));
                }
                if self.eat(&Tok::Neq) {
                    return Ok(not(eq(&name, &self.elem_var()?)));
                }
                if let Some(Tok::Ident(k)) = self.peek() {
                    if k == "in" {
                        self.pos += 1;
                        if self.dialect == Dialect::Fo {
                            return Err(Error::Dialect("in".into()));
                        }
                        let s = self.ident("set variable")?;
                        if !is_set_var(&s) {
                            self.pos -= 1;
                            return self.fail("set variable (uppercase)");
                        }
                        return Ok(Formula::In(name, s));
                    }
                }
                self.fail("`=`, `!=`, `in` or `(`")
            }
            _ => self.fail("formula"),
        }
    }
}

pub fn parse_formula(text: &str, dialect: Dialect) -> Result<Formula> {
    let lx = lex(text)?;
    let mut p = Parser { lx, pos: 0, dialect };
    let f = p.expr()?;
    if p.pos != p.lx.toks.len() {
        return p.fail("end of input");
    }
    Ok(f)
}
