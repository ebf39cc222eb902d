//! Text format for group presentations.
//!
//! ```text
//! # comment
//! < gens ; relators ; meridian [; longitude] >
//! ```
//!
//! Generators are comma separated names starting with a lowercase letter.
//! Relators are comma separated words. A word is a sequence of factors
//! `x`, `X` (the inverse of `x`), `x^n` or `x^-n`, or the literal `1`. When
//! every generator name is a single letter, runs such as `abAB` are split
//! into letters. The angle brackets are optional.

use super::words::{FreeWord, Letter};
use super::Presentation;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(u64),
    Caret,
    Minus,
    Comma,
    Semi,
    Open,
    Close,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&ch) = chars.peek() {
        let (l0, c0) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        match ch {
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump(&mut chars);
                }
            }
            c if c.is_whitespace() => {
                bump(&mut chars);
            }
            c if c.is_ascii_alphabetic() => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        bump(&mut chars);
                    } else {
                        break;
                    }
                }
                out.push(Spanned {
                    tok: Tok::Ident(s),
                    line: l0,
                    column: c0,
                });
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        s.push(c);
                        bump(&mut chars);
                    } else {
                        break;
                    }
                }
                let n = s
                    .parse::<u64>()
                    .map_err(|_| syntax(l0, c0, format!("number `{s}` is too large")))?;
                out.push(Spanned {
                    tok: Tok::Number(n),
                    line: l0,
                    column: c0,
                });
            }
            _ => {
                let tok = match ch {
                    '^' => Tok::Caret,
                    '-' => Tok::Minus,
                    ',' => Tok::Comma,
                    ';' => Tok::Semi,
                    '<' => Tok::Open,
                    '>' => Tok::Close,
                    other => return Err(syntax(l0, c0, format!("unexpected character `{other}`"))),
                };
                bump(&mut chars);
                out.push(Spanned {
                    tok,
                    line: l0,
                    column: c0,
                });
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
    gens: Vec<String>,
    single_letter: bool,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |s| (s.line, s.column))
    }

    fn next(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (l, c) = self.here();
        syntax(l, c, msg)
    }

    fn generators(&mut self) -> Result<()> {
        loop {
            let Some(t) = self.next() else {
                return Err(self.err("expected a generator name"));
            };
            match t.tok {
                Tok::Ident(name) => {
                    if !name.starts_with(|c: char| c.is_ascii_lowercase()) {
                        return Err(syntax(
                            t.line,
                            t.column,
                            format!("generator `{name}` must start with a lowercase letter"),
                        ));
                    }
                    if self.gens.contains(&name) {
                        return Err(syntax(t.line, t.column, format!("generator `{name}` listed twice")));
                    }
                    self.gens.push(name);
                }
                _ => return Err(syntax(t.line, t.column, "expected a generator name")),
            }
            match self.peek() {
                Some(Tok::Comma) => {
                    self.pos += 1;
                }
                _ => break,
            }
        }
        self.single_letter = self.gens.iter().all(|g| g.len() == 1);
        Ok(())
    }

    fn lookup(&self, name: &str, line: usize, column: usize) -> Result<Letter> {
        if let Some(i) = self.gens.iter().position(|g| g == name) {
            return Ok(Letter::new(i, 1));
        }
        let lower = name.to_ascii_lowercase();
        if name.starts_with(|c: char| c.is_ascii_uppercase()) {
            if let Some(i) = self.gens.iter().position(|g| *g == lower) {
                return Ok(Letter::new(i, -1));
            }
        }
        Err(Error::UnknownGenerator {
            name: name.to_string(),
            line,
            column,
        })
    }

    /// Parses an optional `^n` / `^-n` suffix.
    fn exponent(&mut self) -> Result<i64> {
        if self.peek() != Some(&Tok::Caret) {
            return Ok(1);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.next() {
            Some(Spanned {
                tok: Tok::Number(n),
                line,
                column,
            }) => {
                let n = i64::try_from(n).map_err(|_| syntax(line, column, "exponent too large"))?;
                Ok(if neg { -n } else { n })
            }
            _ => {
                self.pos -= 1;
                Err(self.err("expected an integer exponent after `^`"))
            }
        }
    }

    fn word(&mut self) -> Result<FreeWord> {
        let mut letters = Vec::new();
        let mut any = false;
        loop {
            match self.peek() {
                Some(Tok::Number(1)) => {
                    self.pos += 1;
                    any = true;
                }
                Some(Tok::Ident(_)) => {
                    let t = self.next().expect("peeked");
                    let Tok::Ident(name) = t.tok else { unreachable!() };
                    let base: Vec<Letter> = match self.lookup(&name, t.line, t.column) {
                        Ok(l) => vec![l],
                        Err(e) if self.single_letter && name.len() > 1 => {
                            let mut ls = Vec::new();
                            for (k, ch) in name.chars().enumerate() {
                                match self.lookup(&ch.to_string(), t.line, t.column + k) {
                                    Ok(l) => ls.push(l),
                                    Err(_) => return Err(e),
                                }
                            }
                            ls
                        }
                        Err(e) => return Err(e),
                    };
                    let n = self.exponent()?;
                    // The exponent binds to the last letter of a split run.
                    let (last, head) = base.split_last().expect("non-empty");
                    letters.extend_from_slice(head);
                    let l = if n >= 0 { *last } else { last.inverse() };
                    letters.extend(std::iter::repeat_n(l, n.unsigned_abs() as usize));
                    any = true;
                }
                Some(Tok::Number(n)) => {
                    let n = *n;
                    return Err(self.err(format!("unexpected number `{n}` in a word")));
                }
                Some(Tok::Caret) | Some(Tok::Minus) => {
                    return Err(self.err("exponent without a generator"));
                }
                _ => break,
            }
        }
        if !any {
            return Err(self.err("expected a word"));
        }
        Ok(FreeWord::new(letters))
    }

    fn expect_semi(&mut self, what: &str) -> Result<()> {
        match self.next() {
            Some(Spanned { tok: Tok::Semi, .. }) => Ok(()),
            _ => {
                self.pos -= 1;
                Err(self.err(format!("expected `;` before {what}")))
            }
        }
    }

    fn presentation(&mut self) -> Result<Presentation> {
        let bracketed = self.peek() == Some(&Tok::Open);
        if bracketed {
            self.pos += 1;
        }
        self.generators()?;
        self.expect_semi("the relators")?;
        let mut relators = Vec::new();
        if self.peek() != Some(&Tok::Semi) {
            loop {
                relators.push(self.word()?);
                if self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }
        self.expect_semi("the meridian")?;
        let meridian = self.word()?;
        let longitude = if self.peek() == Some(&Tok::Semi) {
            self.pos += 1;
            Some(self.word()?)
        } else {
            None
        };
        if bracketed {
            match self.next() {
                Some(Spanned { tok: Tok::Close, .. }) => {}
                _ => {
                    self.pos -= 1;
                    return Err(self.err("expected `>`"));
                }
            }
        }
        if self.pos < self.toks.len() {
            return Err(self.err("unexpected trailing input"));
        }
        Presentation::new(std::mem::take(&mut self.gens), relators, meridian, longitude)
    }
}

/// Parses the text format described in the module documentation.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let toks = tokenize(text)?;
    let end = text
        .lines()
        .enumerate()
        .last()
        .map_or((1, 1), |(i, l)| (i + 1, l.chars().count() + 1));
    Parser {
        toks,
        pos: 0,
        end,
        gens: Vec::new(),
        single_letter: false,
    }
    .presentation()
}

fn write_word(out: &mut String, w: &FreeWord, gens: &[String]) {
    if w.is_empty() {
        out.push('1');
        return;
    }
    let letters = w.letters();
    let mut i = 0;
    let mut first = true;
    while i < letters.len() {
        let l = letters[i];
        let mut run = 1;
        while i + run < letters.len() && letters[i + run] == l {
            run += 1;
        }
        if !first {
            out.push(' ');
        }
        first = false;
        let name = &gens[l.gen];
        let alpha = name.chars().all(|c| c.is_ascii_alphabetic());
        if run == 1 && l.exp < 0 && alpha {
            out.push_str(&name.to_ascii_uppercase());
        } else if run == 1 && l.exp > 0 {
            out.push_str(name);
        } else {
            out.push_str(name);
            out.push('^');
            if l.exp < 0 {
                out.push('-');
            }
            out.push_str(&run.to_string());
        }
        i += run;
    }
}

/// Canonical single-line form accepted by [`parse_presentation`].
pub fn serialize_presentation(p: &Presentation) -> String {
    let gens = p.generators();
    let mut out = String::from("<");
    out.push_str(&gens.join(", "));
    out.push_str(" ; ");
    for (k, r) in p.relators().iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        write_word(&mut out, r, gens);
    }
    out.push_str(" ; ");
    write_word(&mut out, p.meridian(), gens);
    if let Some(l) = p.longitude() {
        out.push_str(" ; ");
        write_word(&mut out, l, gens);
    }
    out.push('>');
    out
}
