//! Text forms of states and patterns. Columns in errors are 1-based
//! character positions within the parsed text.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::hypergraph::{HPattern, Hypergraph};
use crate::strings::StringState;
use crate::term::Term;

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    _text: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            chars: text.chars().collect(),
            pos: 0,
            _text: text,
        }
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => Err(Error::syntax(self.column(), format!("expected `{c}`, found `{d}`"))),
            None => Err(Error::syntax(
                self.column(),
                format!("expected `{c}`, found end of input"),
            )),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(Error::syntax(self.column(), format!("unexpected `{c}`"))),
        }
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::syntax(start + 1, "expected a vertex number"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits
            .parse()
            .map_err(|_| Error::syntax(start + 1, format!("vertex `{digits}` is too large")))
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && is_ident_char(self.chars[self.pos], self.pos == start) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(match self.chars.get(start) {
                Some(c) => Error::syntax(start + 1, format!("expected an identifier, found `{c}`")),
                None => Error::syntax(start + 1, "expected an identifier, found end of input"),
            });
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    /// `{ item, item, ... }` with at least `min` items.
    fn braced<T>(&mut self, min: usize, mut item: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        self.expect('{')?;
        let mut out = Vec::new();
        if self.eat('}') {
            if min > 0 {
                return Err(Error::syntax(self.pos, "empty hyperedge"));
            }
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat('}') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }
}

pub(crate) fn is_ident_char(c: char, first: bool) -> bool {
    if first {
        c.is_alphabetic() || c == '_'
    } else {
        c.is_alphanumeric() || c == '_' || c == '\''
    }
}

/// A string state: its characters verbatim, or `""` for the empty string.
pub fn parse_string_state(text: &str) -> Result<StringState> {
    let text = text.trim();
    if text == "\"\"" {
        return Ok(StringState::new(""));
    }
    if text.is_empty() {
        return Err(Error::syntax(1, "empty string state; write \"\""));
    }
    if let Some((i, c)) = text
        .chars()
        .enumerate()
        .find(|(_, c)| c.is_whitespace() || *c == '"' || *c == '#')
    {
        return Err(Error::syntax(i + 1, format!("`{c}` is not allowed in a string state")));
    }
    Ok(StringState::new(text))
}

/// `{{1,2},{2,3}}`; `{}` is the empty hypergraph.
pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    let mut c = Cursor::new(text);
    let edges = c.braced(0, |c| c.braced(1, |c| c.number()))?;
    c.finish()?;
    Ok(Hypergraph::new(edges))
}

/// `{{x,y},{y,z}}` over variable names.
pub fn parse_hpattern(text: &str) -> Result<HPattern> {
    let mut c = Cursor::new(text);
    let edges = c.braced(0, |c| c.braced(1, |c| c.ident()))?;
    c.finish()?;
    Ok(HPattern { edges })
}

/// `g[x, inv[y]]`; identifiers in `vars` become variables, all others are
/// function symbols (constants when written without brackets).
pub fn parse_term(text: &str, vars: &BTreeSet<String>) -> Result<Term> {
    let mut c = Cursor::new(text);
    let t = term(&mut c, vars)?;
    c.finish()?;
    Ok(t)
}

fn term(c: &mut Cursor<'_>, vars: &BTreeSet<String>) -> Result<Term> {
    let col = {
        c.skip_ws();
        c.column()
    };
    let name = c.ident()?;
    if c.eat('[') {
        if vars.contains(&name) {
            return Err(Error::syntax(col, format!("variable `{name}` cannot take arguments")));
        }
        let mut args = vec![term(c, vars)?];
        while c.eat(',') {
            args.push(term(c, vars)?);
        }
        c.expect(']')?;
        Ok(Term::App(name, args))
    } else if vars.contains(&name) {
        Ok(Term::Var(name))
    } else {
        Ok(Term::App(name, Vec::new()))
    }
}
