//! Parity decision trees and their s-expression form
//! `(q <hex> <zero-branch> <one-branch>)` / `(leaf <bit>)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};
use crate::f2linalg::parity;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ParityDecisionTree {
    Leaf(bool),
    /// Branches on `⟨query, x⟩`.
    Node {
        query: u64,
        zero: Box<ParityDecisionTree>,
        one: Box<ParityDecisionTree>,
    },
}

impl ParityDecisionTree {
    pub fn node(query: u64, zero: ParityDecisionTree, one: ParityDecisionTree) -> Self {
        ParityDecisionTree::Node {
            query,
            zero: Box::new(zero),
            one: Box::new(one),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            ParityDecisionTree::Leaf(_) => 0,
            ParityDecisionTree::Node { zero, one, .. } => 1 + zero.depth().max(one.depth()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            ParityDecisionTree::Leaf(_) => 1,
            ParityDecisionTree::Node { zero, one, .. } => 1 + zero.size() + one.size(),
        }
    }

    /// Whether every query is a single coordinate.
    pub fn is_ordinary(&self) -> bool {
        match self {
            ParityDecisionTree::Leaf(_) => true,
            ParityDecisionTree::Node { query, zero, one } => {
                query.count_ones() == 1 && zero.is_ordinary() && one.is_ordinary()
            }
        }
    }

    pub fn evaluate(&self, x: u64) -> bool {
        let mut t = self;
        loop {
            match t {
                ParityDecisionTree::Leaf(b) => return *b,
                ParityDecisionTree::Node { query, zero, one } => {
                    t = if parity(query & x) { one } else { zero };
                }
            }
        }
    }

    /// Checks that the tree computes `f` and that queries along every path
    /// are nonzero, fit the arity, and are linearly independent.
    pub fn validate(&self, f: &BooleanFunction) -> Result<()> {
        fn walk(t: &ParityDecisionTree, n: usize, basis: &mut Vec<u64>) -> Result<()> {
            let ParityDecisionTree::Node { query, zero, one } = t else {
                return Ok(());
            };
            if *query == 0 || (n < 64 && query >> n != 0) {
                return Err(Error::InvalidParam(format!("query {query:#x} out of range")));
            }
            let mut v = *query;
            for &b in basis.iter() {
                if v & (b & b.wrapping_neg()) != 0 {
                    v ^= b;
                }
            }
            if v == 0 {
                return Err(Error::InvalidParam(format!(
                    "query {query:#x} depends on earlier queries on its path"
                )));
            }
            let low = v & v.wrapping_neg();
            let saved = basis.clone();
            for b in basis.iter_mut() {
                if *b & low != 0 {
                    *b ^= v;
                }
            }
            basis.push(v);
            walk(zero, n, basis)?;
            walk(one, n, basis)?;
            *basis = saved;
            Ok(())
        }
        walk(self, f.arity(), &mut Vec::new())?;
        if let Some(x) = (0..f.table_len()).find(|&x| self.evaluate(x) != f.get(x)) {
            return Err(Error::InvalidParam(format!("tree disagrees with f at {x:#x}")));
        }
        Ok(())
    }
}

impl fmt::Display for ParityDecisionTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParityDecisionTree::Leaf(b) => write!(f, "(leaf {})", *b as u8),
            ParityDecisionTree::Node { query, zero, one } => {
                write!(f, "(q {query:x} {zero} {one})")
            }
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: impl Into<String>) -> Error {
        let before = &self.src[..self.pos];
        let line = before.matches('\n').count() + 1;
        let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
        Error::parse(line, column, msg)
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(|c: char| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn atom(&mut self) -> Result<&str> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let len = rest
            .find(|c: char| c.is_whitespace() || c == '(' || c == ')')
            .unwrap_or(rest.len());
        if len == 0 {
            return Err(self.error("expected an atom"));
        }
        self.pos += len;
        Ok(&self.src[start..start + len])
    }

    fn tree(&mut self, depth: usize) -> Result<ParityDecisionTree> {
        if depth > 64 {
            return Err(self.error("tree nested too deeply"));
        }
        self.expect('(')?;
        let head_pos = self.pos;
        let head = self.atom()?.to_owned();
        let t = match head.as_str() {
            "leaf" => {
                let at = self.pos;
                let b = match self.atom()? {
                    "0" => false,
                    "1" => true,
                    _ => {
                        self.pos = at;
                        self.skip_ws();
                        return Err(self.error("leaf value must be 0 or 1"));
                    }
                };
                ParityDecisionTree::Leaf(b)
            }
            "q" => {
                self.skip_ws();
                let at = self.pos;
                let hex = self.atom()?;
                let query = match u64::from_str_radix(hex, 16) {
                    Ok(q) if hex.len() <= 16 => q,
                    _ => {
                        self.pos = at;
                        return Err(self.error("bad query vector"));
                    }
                };
                let zero = self.tree(depth + 1)?;
                let one = self.tree(depth + 1)?;
                ParityDecisionTree::node(query, zero, one)
            }
            _ => {
                self.pos = head_pos;
                self.skip_ws();
                return Err(self.error(format!("unknown node `{head}`")));
            }
        };
        self.expect(')')?;
        Ok(t)
    }
}

impl FromStr for ParityDecisionTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s, pos: 0 };
        let t = p.tree(0)?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.error("trailing input"));
        }
        Ok(t)
    }
}

impl Serialize for ParityDecisionTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ParityDecisionTree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
