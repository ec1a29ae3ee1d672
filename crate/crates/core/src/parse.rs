//! Text syntax for outer commutator words.
//!
//! ```text
//! word    := indet | builtin | '[' word (',' word)+ ']'
//! indet   := 'x' INT            (INT >= 1)
//! builtin := ('g' | 'gamma') INT   (INT >= 1)
//!          | ('d' | 'delta') INT   (INT >= 0)
//! ```
//!
//! Whitespace is ignored. `[a,b,c]` means `[[a,b],c]`. Indeterminate names
//! are not significant: every leaf gets a fresh name, numbered in pre-order.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::word::{Caps, VertexId, WordTree};

pub fn parse(text: &str) -> Result<WordTree> {
    parse_with_caps(text, &Caps::default())
}

pub fn parse_with_caps(text: &str, caps: &Caps) -> Result<WordTree> {
    if !text.is_ascii() {
        let pos = text.char_indices().find(|(_, c)| !c.is_ascii()).map(|(i, _)| i).unwrap_or(0);
        return Err(syntax(pos, "non-ASCII character"));
    }
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        caps,
    };
    let w = p.word()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(syntax(p.pos, format!("unexpected '{}' after word", p.src[p.pos] as char)));
    }
    Ok(w)
}

impl FromStr for WordTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderMode {
    Bracket,
    Tree,
}

impl FromStr for RenderMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bracket" => Ok(RenderMode::Bracket),
            "tree" => Ok(RenderMode::Tree),
            other => Err(Error::arg(format!("unknown render mode '{other}'"))),
        }
    }
}

/// Bracket mode gives nested binary commutators with no whitespace. Tree
/// mode prints one vertex per line, indented two spaces per depth, as
/// `L<level> <label>`.
pub fn render(t: &WordTree, mode: RenderMode) -> String {
    match mode {
        RenderMode::Bracket => t.to_string(),
        RenderMode::Tree => {
            let mut out = String::new();
            render_tree(t, t.root(), &mut out);
            out
        }
    }
}

fn render_tree(t: &WordTree, v: VertexId, out: &mut String) {
    let depth = t.depth(v).unwrap();
    for _ in 0..depth {
        out.push_str("  ");
    }
    out.push_str(&format!("L{} {}\n", t.level_of(v).unwrap(), t.label(v).unwrap()));
    if let Some((l, r)) = t.children(v).unwrap() {
        render_tree(t, l, out);
        render_tree(t, r, out);
    }
}

fn syntax(position: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        position,
        message: message.into(),
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    caps: &'a Caps,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn word(&mut self) -> Result<WordTree> {
        match self.peek() {
            None => Err(syntax(self.pos, "unexpected end of input, expected a word")),
            Some(b'[') => self.bracket(),
            Some(c) if c.is_ascii_alphabetic() => self.atom(),
            Some(c) => Err(syntax(self.pos, format!("unexpected '{}', expected a word", c as char))),
        }
    }

    fn bracket(&mut self) -> Result<WordTree> {
        let open = self.pos;
        self.pos += 1;
        if self.peek() == Some(b']') {
            return Err(syntax(self.pos, "empty commutator"));
        }
        let mut acc = self.word()?;
        let mut operands = 1;
        loop {
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                    let next = self.word()?;
                    acc = WordTree::commutator(&acc, &next);
                    operands += 1;
                }
                Some(b']') => {
                    if operands < 2 {
                        return Err(syntax(self.pos, "commutator needs at least two operands"));
                    }
                    self.pos += 1;
                    return Ok(acc);
                }
                None => return Err(syntax(self.pos, format!("unbalanced '[' opened at position {open}"))),
                Some(c) => return Err(syntax(self.pos, format!("unexpected '{}', expected ',' or ']'", c as char))),
            }
        }
    }

    fn atom(&mut self) -> Result<WordTree> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let num_start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if num_start == self.pos {
            return Err(syntax(num_start, format!("expected an index after '{name}'")));
        }
        let digits = std::str::from_utf8(&self.src[num_start..self.pos]).expect("ascii");
        let n: usize = digits
            .parse()
            .map_err(|_| syntax(num_start, format!("index '{digits}' out of range")))?;
        match name {
            "x" => {
                if n == 0 {
                    return Err(syntax(num_start, "indeterminate indices start at 1"));
                }
                Ok(WordTree::indeterminate())
            }
            "g" | "gamma" => WordTree::gamma_capped(n, self.caps),
            "d" | "delta" => WordTree::delta_capped(n, self.caps),
            other => Err(syntax(start, format!("unknown name '{other}'"))),
        }
    }
}
