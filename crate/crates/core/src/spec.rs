//! Text specs for rings and modules.
//!
//! ```text
//! ring   := "zmod:" INT | "prod:[" ring ("," ring)* "]" | "quot:(" ring ";" INTLIST ")"
//!         | "trivext:(" ring ";" module ")" | "dup:(" ring ";" INTLIST ")"
//! module := "free:" INT | "cyclic:[" INTLIST "]" | "matrix:[" ("[" INTLIST "]" ("," "[" INTLIST "]")*)? "]"
//! ```
//!
//! Whitespace between tokens is ignored. Element indices refer to the
//! canonical enumeration of the ring they live in.

use crate::error::{Error, Result};
use crate::module::{cyclic, free, present, Matrix, Module};
use crate::ring::{build_duplication, build_product, build_quotient, build_trivial_extension, build_zmod, Ring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingExpr {
    Zmod(usize),
    Product(Vec<RingExpr>),
    Quotient(Box<RingExpr>, Vec<usize>),
    TrivialExtension(Box<RingExpr>, ModuleExpr),
    Duplication(Box<RingExpr>, Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleExpr {
    Free(usize),
    Cyclic(Vec<usize>),
    Matrix(Vec<Vec<usize>>),
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { text, pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            self.err(format!("expected `{token}`"))
        }
    }

    fn int(&mut self) -> Result<usize> {
        self.skip_ws();
        let digits: usize = self.text[self.pos..]
            .chars()
            .take_while(|c| c.is_ascii_digit())
            .count();
        if digits == 0 {
            return self.err("expected a non-negative integer");
        }
        let start = self.pos;
        match self.text[start..start + digits].parse() {
            Ok(n) => {
                self.pos += digits;
                Ok(n)
            }
            Err(_) => self.err("integer out of range"),
        }
    }

    /// Possibly empty list of integers up to (not including) `close`.
    fn int_list(&mut self, close: char) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        if self.peek() == Some(close) {
            return Ok(out);
        }
        loop {
            out.push(self.int()?);
            if !self.eat(",") {
                return Ok(out);
            }
        }
    }

    fn ring(&mut self) -> Result<RingExpr> {
        if self.eat("zmod:") {
            Ok(RingExpr::Zmod(self.int()?))
        } else if self.eat("prod:") {
            self.expect("[")?;
            let mut parts = vec![self.ring()?];
            while self.eat(",") {
                parts.push(self.ring()?);
            }
            self.expect("]")?;
            Ok(RingExpr::Product(parts))
        } else if self.eat("quot:") {
            let (base, gens) = self.ring_and_list()?;
            Ok(RingExpr::Quotient(Box::new(base), gens))
        } else if self.eat("dup:") {
            let (base, gens) = self.ring_and_list()?;
            Ok(RingExpr::Duplication(Box::new(base), gens))
        } else if self.eat("trivext:") {
            self.expect("(")?;
            let base = self.ring()?;
            self.expect(";")?;
            let module = self.module()?;
            self.expect(")")?;
            Ok(RingExpr::TrivialExtension(Box::new(base), module))
        } else {
            self.err("expected one of `zmod:`, `prod:`, `quot:`, `trivext:`, `dup:`")
        }
    }

    fn ring_and_list(&mut self) -> Result<(RingExpr, Vec<usize>)> {
        self.expect("(")?;
        let base = self.ring()?;
        self.expect(";")?;
        let gens = self.int_list(')')?;
        self.expect(")")?;
        Ok((base, gens))
    }

    fn module(&mut self) -> Result<ModuleExpr> {
        if self.eat("free:") {
            Ok(ModuleExpr::Free(self.int()?))
        } else if self.eat("cyclic:") {
            self.expect("[")?;
            let gens = self.int_list(']')?;
            self.expect("]")?;
            Ok(ModuleExpr::Cyclic(gens))
        } else if self.eat("matrix:") {
            self.expect("[")?;
            let mut rows = Vec::new();
            if self.peek() != Some(']') {
                loop {
                    self.expect("[")?;
                    rows.push(self.int_list(']')?);
                    self.expect("]")?;
                    if !self.eat(",") {
                        break;
                    }
                }
            }
            self.expect("]")?;
            if rows.windows(2).any(|w| w[0].len() != w[1].len()) {
                return self.err("matrix rows have different lengths");
            }
            Ok(ModuleExpr::Matrix(rows))
        } else {
            self.err("expected one of `free:`, `cyclic:`, `matrix:`")
        }
    }

    fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos < self.text.len() {
            self.err("unexpected trailing input")
        } else {
            Ok(())
        }
    }
}

pub fn parse_ring_expr(text: &str) -> Result<RingExpr> {
    let mut p = Parser::new(text);
    let e = p.ring()?;
    p.finish()?;
    Ok(e)
}

pub fn parse_module_expr(text: &str) -> Result<ModuleExpr> {
    let mut p = Parser::new(text);
    let e = p.module()?;
    p.finish()?;
    Ok(e)
}

fn check_indices(r: &Ring, xs: &[usize], what: &str) -> Result<()> {
    match xs.iter().find(|&&x| x >= r.size()) {
        Some(x) => Err(Error::InvalidArgument(format!(
            "{what}: element {x} out of range for {} (size {})",
            r.spec(),
            r.size()
        ))),
        None => Ok(()),
    }
}

pub fn build_ring(e: &RingExpr) -> Result<Ring> {
    match e {
        RingExpr::Zmod(n) => {
            if *n == 0 {
                return Err(Error::InvalidArgument("zmod:0 is not a finite ring".into()));
            }
            build_zmod(*n)
        }
        RingExpr::Product(parts) => {
            let rings: Vec<Ring> = parts.iter().map(build_ring).collect::<Result<_>>()?;
            build_product(&rings)
        }
        RingExpr::Quotient(base, gens) => {
            let r = build_ring(base)?;
            check_indices(&r, gens, "quotient generators")?;
            Ok(build_quotient(&r, gens)?.0)
        }
        RingExpr::Duplication(base, gens) => {
            let r = build_ring(base)?;
            check_indices(&r, gens, "duplication ideal generators")?;
            build_duplication(&r, gens)
        }
        RingExpr::TrivialExtension(base, m) => {
            let r = build_ring(base)?;
            let e = build_module(&r, m)?;
            build_trivial_extension(&r, &e)
        }
    }
}

pub fn build_module(r: &Ring, e: &ModuleExpr) -> Result<Module> {
    match e {
        ModuleExpr::Free(n) => free(r, *n),
        ModuleExpr::Cyclic(gens) => {
            check_indices(r, gens, "annihilator generators")?;
            cyclic(r, gens)
        }
        ModuleExpr::Matrix(rows) => {
            for row in rows {
                check_indices(r, row, "relation matrix")?;
            }
            present(r, &Matrix::try_from_rows(rows.clone())?)
        }
    }
}

pub fn parse_ring_spec(text: &str) -> Result<Ring> {
    build_ring(&parse_ring_expr(text)?)
}

pub fn parse_module_spec(text: &str, r: &Ring) -> Result<Module> {
    build_module(r, &parse_module_expr(text)?)
}
