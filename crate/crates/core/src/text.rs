//! Hand-rolled cursor over the s-expression text forms.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::point::{Code, Point};

pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    pub(crate) fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub(crate) fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    pub(crate) fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    pub(crate) fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos == self.src.len() {
            Ok(())
        } else {
            self.err("trailing input")
        }
    }

    /// Alphanumeric word, `_` and `-` included.
    pub(crate) fn word(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest
            .char_indices()
            .find(|&(_, c)| !(c.is_ascii_alphanumeric() || c == '_' || c == '-'))
            .map_or(rest.len(), |(i, _)| i);
        if len == 0 {
            return self.err("expected a word");
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    pub(crate) fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest.bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return self.err("expected a number");
        }
        let value = rest[..len].parse::<u64>();
        match value {
            Ok(v) => {
                self.pos += len;
                Ok(v)
            }
            Err(_) => self.err("number out of range"),
        }
    }

    pub(crate) fn code(&mut self) -> Result<Code> {
        let at = self.pos;
        let v = self.number()?;
        Code::try_from(v).map_err(|_| Error::Parse { pos: at, msg: "code out of range".into() })
    }

    /// Codes separated by whitespace or commas up to `close`.
    fn code_list(&mut self, close: char) -> Result<Vec<Code>> {
        let mut codes = Vec::new();
        loop {
            if self.eat(close) {
                return Ok(codes);
            }
            if !codes.is_empty() {
                self.eat(',');
            }
            codes.push(self.code()?);
        }
    }

    /// `{c1 c2 ...}` with strictly increasing codes.
    pub(crate) fn point(&mut self) -> Result<Point> {
        self.expect('{')?;
        let at = self.pos;
        let codes = self.code_list('}')?;
        if codes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse { pos: at, msg: "point codes must be strictly increasing".into() });
        }
        Ok(Point::from_sorted_unchecked(codes))
    }

    /// `[c1 c2 ...]` as a set.
    pub(crate) fn code_set(&mut self) -> Result<BTreeSet<Code>> {
        self.expect('[')?;
        let at = self.pos;
        let codes = self.code_list(']')?;
        if codes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse { pos: at, msg: "codes must be strictly increasing".into() });
        }
        Ok(codes.into_iter().collect())
    }

    /// `[{..} {..} ...]`.
    pub(crate) fn point_list(&mut self) -> Result<Vec<Point>> {
        self.expect('[')?;
        let mut pts = Vec::new();
        while !self.eat(']') {
            pts.push(self.point()?);
        }
        Ok(pts)
    }

    pub(crate) fn keyword(&mut self, kw: &str) -> Result<()> {
        let at = self.pos;
        let w = self.word()?;
        if w == kw {
            Ok(())
        } else {
            Err(Error::Parse { pos: at, msg: format!("expected '{kw}', found '{w}'") })
        }
    }
}

pub(crate) fn write_codes(f: &mut std::fmt::Formatter<'_>, codes: impl IntoIterator<Item = Code>) -> std::fmt::Result {
    f.write_str("[")?;
    for (i, c) in codes.into_iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{c}")?;
    }
    f.write_str("]")
}
