//! Textual literals for [`SymbolicSet`].
//!
//! ```text
//! expr   := term { ('+' | '\' | '&') term }      union, difference, intersection; left to right
//! term   := '!' term | '(' expr ')' | atom       '!' is complement
//! atom   := 'Z' | 'tail(' int ')' | 'head(' int ')'
//!         | 'evens<0' | 'odds<0' | 'evens' | 'odds'
//!         | 'finite{' ints '}' | '{' ints '}'
//!         | 'periodic(p=' int ', window=[' int ',' int '], explicit={' ints '}, left={' ints '}, right={' ints '})'
//! ```
//!
//! The printer emits the shortest of `base`, `base \ {..}`, `base + {..}` or
//! `base \ {..} + {..}` over the named bases, falling back to `periodic(..)`.

use std::collections::BTreeSet;
use std::fmt;

use super::{RawSet, SymbolicSet};
use crate::error::{Error, Result};

/// Parse a set literal.
pub fn parse(src: &str) -> Result<SymbolicSet> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let set = p.expr()?;
    p.ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(set)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn expect_word(&mut self, w: &str) -> Result<()> {
        self.ws();
        if self.src[self.pos..].starts_with(w.as_bytes()) {
            self.pos += w.len();
            Ok(())
        } else {
            Err(self.err(&format!("expected `{w}`")))
        }
    }

    fn expr(&mut self) -> Result<SymbolicSet> {
        let mut acc = self.term()?;
        loop {
            let op = match self.peek() {
                Some(c @ (b'+' | b'\\' | b'&')) => c,
                _ => return Ok(acc),
            };
            self.pos += 1;
            let rhs = self.term()?;
            acc = match op {
                b'+' => acc.union(&rhs),
                b'\\' => acc.difference(&rhs),
                _ => acc.intersect(&rhs),
            };
        }
    }

    fn term(&mut self) -> Result<SymbolicSet> {
        match self.peek() {
            Some(b'!') => {
                self.pos += 1;
                Ok(self.term()?.complement())
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'{') => Ok(SymbolicSet::finite(self.braces()?)),
            Some(c) if c.is_ascii_alphabetic() => self.atom(),
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn ident(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("")
    }

    fn atom(&mut self) -> Result<SymbolicSet> {
        let start = self.pos;
        let name = self.ident().to_string();
        let negative_only = self.src[self.pos..].starts_with(b"<0");
        if negative_only {
            self.pos += 2;
        }
        match (name.as_str(), negative_only) {
            ("Z", false) => Ok(SymbolicSet::universe()),
            ("evens", true) => Ok(SymbolicSet::evens_neg()),
            ("odds", true) => Ok(SymbolicSet::odds_neg()),
            ("evens", false) => Ok(SymbolicSet::evens()),
            ("odds", false) => Ok(SymbolicSet::odds()),
            ("tail", false) | ("head", false) => {
                self.expect(b'(')?;
                let k = self.int()?;
                self.expect(b')')?;
                Ok(if name == "tail" {
                    SymbolicSet::tail(k)
                } else {
                    SymbolicSet::head(k)
                })
            }
            ("finite", false) => Ok(SymbolicSet::finite(self.braces()?)),
            ("periodic", false) => self.periodic(),
            _ => {
                self.pos = start;
                Err(self.err(&format!("unknown atom `{name}`")))
            }
        }
    }

    fn periodic(&mut self) -> Result<SymbolicSet> {
        self.expect(b'(')?;
        self.expect_word("p")?;
        self.expect(b'=')?;
        let p = self.int()?;
        self.expect(b',')?;
        self.expect_word("window")?;
        self.expect(b'=')?;
        self.expect(b'[')?;
        let lo = self.int()?;
        self.expect(b',')?;
        let hi = self.int()?;
        self.expect(b']')?;
        let mut parts = Vec::new();
        for key in ["explicit", "left", "right"] {
            self.expect(b',')?;
            self.expect_word(key)?;
            self.expect(b'=')?;
            parts.push(self.braces()?);
        }
        self.expect(b')')?;
        let to_res = |v: &[i64]| -> Result<Vec<u32>> {
            v.iter()
                .map(|r| u32::try_from(*r).map_err(|_| Error::Validation(format!("negative residue {r}"))))
                .collect()
        };
        let raw = RawSet {
            period: u32::try_from(p).map_err(|_| Error::Validation(format!("bad period {p}")))?,
            lo,
            hi,
            explicit: parts[0].clone(),
            left_residues: to_res(&parts[1])?,
            right_residues: to_res(&parts[2])?,
        };
        SymbolicSet::normalize(&raw)
    }

    fn braces(&mut self) -> Result<Vec<i64>> {
        self.expect(b'{')?;
        let mut out = Vec::new();
        if self.eat(b'}') {
            return Ok(out);
        }
        loop {
            out.push(self.int()?);
            if self.eat(b'}') {
                return Ok(out);
            }
            self.expect(b',')?;
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.ws();
        let start = self.pos;
        if self.pos < self.src.len() && (self.src[self.pos] == b'-' || self.src[self.pos] == b'+') {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse {
                pos: start,
                msg: "expected integer".into(),
            })
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, xs: impl IntoIterator<Item = impl fmt::Display>) -> fmt::Result {
    f.write_str("{")?;
    for (i, x) in xs.into_iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str("}")
}

impl SymbolicSet {
    /// Named bases tried by the printer, with their literal text.
    fn print_bases(&self) -> Vec<(String, SymbolicSet)> {
        let (lo, hi) = self.window();
        let mut k = hi + 1;
        while k > lo && self.member(k - 1) {
            k -= 1;
        }
        let mut h = lo - 1;
        while h < hi && self.member(h + 1) {
            h += 1;
        }
        vec![
            ("Z".into(), SymbolicSet::universe()),
            (format!("tail({k})"), SymbolicSet::tail(k)),
            (format!("head({h})"), SymbolicSet::head(h)),
            ("evens<0".into(), SymbolicSet::evens_neg()),
            ("odds<0".into(), SymbolicSet::odds_neg()),
            ("evens".into(), SymbolicSet::evens()),
            ("odds".into(), SymbolicSet::odds()),
        ]
    }
}

impl fmt::Display for SymbolicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(els) = self.elements() {
            f.write_str("finite")?;
            return write_list(f, els);
        }
        for (name, base) in self.print_bases() {
            let missing = base.difference(self);
            let added = self.difference(&base);
            let (Some(m), Some(a)) = (missing.elements(), added.elements()) else {
                continue;
            };
            f.write_str(&name)?;
            if !m.is_empty() {
                f.write_str(" \\ ")?;
                write_list(f, m)?;
            }
            if !a.is_empty() {
                f.write_str(" + ")?;
                write_list(f, a)?;
            }
            return Ok(());
        }
        let raw = self.to_raw();
        write!(
            f,
            "periodic(p={}, window=[{},{}], explicit=",
            raw.period, raw.lo, raw.hi
        )?;
        write_list(f, &raw.explicit)?;
        f.write_str(", left=")?;
        write_list(f, &raw.left_residues)?;
        f.write_str(", right=")?;
        write_list(f, &raw.right_residues)?;
        f.write_str(")")
    }
}

/// Parse a comma separated list of integers such as `1, 2, -3` (no braces).
pub fn parse_int_list(s: &str) -> Result<BTreeSet<i64>> {
    let t = s.trim();
    if t.is_empty() {
        return Ok(BTreeSet::new());
    }
    t.split(',')
        .map(|x| {
            x.trim().parse::<i64>().map_err(|_| Error::Parse {
                pos: 0,
                msg: format!("bad integer `{}`", x.trim()),
            })
        })
        .collect()
}
