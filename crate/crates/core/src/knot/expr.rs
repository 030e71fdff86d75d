use std::fmt;
use std::path::{Path, PathBuf};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

use super::SeifertKnot;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KnotExpr {
    Torus {
        p: u64,
        q: u64,
    },
    Mirror(Box<KnotExpr>),
    /// `k` copies joined by connected sum; `k = 0` is the unknot.
    Multiple(u64, Box<KnotExpr>),
    Sum(Box<KnotExpr>, Box<KnotExpr>),
    Literal(SeifertKnot),
}

impl KnotExpr {
    pub fn torus(p: u64, q: u64) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::invalid(format!("T({p},{q}): parameters must be positive")));
        }
        if p.gcd(&q) != 1 {
            return Err(Error::NotCoprime { p, q });
        }
        Ok(KnotExpr::Torus { p, q })
    }

    pub fn unknot() -> Self {
        KnotExpr::Multiple(0, Box::new(KnotExpr::Torus { p: 2, q: 1 }))
    }

    pub fn mirror(self) -> Self {
        KnotExpr::Mirror(Box::new(self))
    }

    pub fn times(self, k: u64) -> Self {
        KnotExpr::Multiple(k, Box::new(self))
    }

    pub fn sum(self, other: KnotExpr) -> Self {
        KnotExpr::Sum(Box::new(self), Box::new(other))
    }
}

impl fmt::Display for KnotExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KnotExpr::Torus { p, q } => write!(f, "T({p},{q})"),
            KnotExpr::Mirror(e) => write!(f, "mirror({e})"),
            KnotExpr::Multiple(k, e) => match **e {
                KnotExpr::Sum(..) => write!(f, "{k}*({e})"),
                _ => write!(f, "{k}*{e}"),
            },
            KnotExpr::Sum(a, b) => match **b {
                KnotExpr::Sum(..) => write!(f, "{a} # ({b})"),
                _ => write!(f, "{a} # {b}"),
            },
            KnotExpr::Literal(k) => {
                let n = k.matrix().rows();
                write!(f, "seifert(<{n}x{n}>)")
            }
        }
    }
}

/// Supplies the matrices named by `seifert(PATH)` atoms.
pub trait MatrixResolver {
    fn resolve(&self, path: &str) -> Result<IntMatrix>;
}

/// Reads matrix files relative to a base directory.
pub struct FsResolver {
    base: PathBuf,
}

impl FsResolver {
    pub fn new(base: impl AsRef<Path>) -> Self {
        FsResolver {
            base: base.as_ref().to_path_buf(),
        }
    }
}

impl Default for FsResolver {
    fn default() -> Self {
        FsResolver::new(".")
    }
}

impl MatrixResolver for FsResolver {
    fn resolve(&self, path: &str) -> Result<IntMatrix> {
        IntMatrix::load(self.base.join(path))
    }
}

/// Parses a knot expression, loading `seifert(PATH)` atoms from the working
/// directory.
pub fn parse_knot_expr(text: &str) -> Result<KnotExpr> {
    parse_knot_expr_with(text, &FsResolver::default())
}

pub fn parse_knot_expr_with(text: &str, resolver: &dyn MatrixResolver) -> Result<KnotExpr> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        resolver,
    };
    let e = p.expr()?;
    p.ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    resolver: &'a dyn MatrixResolver,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
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

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.ws();
        if self.src[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<u64> {
        self.ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Syntax {
                pos: start,
                msg: "integer out of range".into(),
            })
    }

    fn expr(&mut self) -> Result<KnotExpr> {
        let mut acc = self.term()?;
        while self.peek() == Some(b'#') {
            self.pos += 1;
            let rhs = self.term()?;
            acc = acc.sum(rhs);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<KnotExpr> {
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let k = self.int()?;
            self.expect(b'*')?;
            let atom = self.atom()?;
            return Ok(atom.times(k));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<KnotExpr> {
        let start = {
            self.ws();
            self.pos
        };
        if self.keyword("mirror") {
            self.expect(b'(')?;
            let e = self.expr()?;
            self.expect(b')')?;
            return Ok(e.mirror());
        }
        if self.keyword("seifert") {
            self.expect(b'(')?;
            let begin = self.pos;
            while self.pos < self.src.len() && self.src[self.pos] != b')' {
                self.pos += 1;
            }
            if self.pos == self.src.len() {
                return Err(self.err("unterminated seifert(...)"));
            }
            let path = std::str::from_utf8(&self.src[begin..self.pos])
                .unwrap()
                .trim()
                .to_string();
            self.pos += 1;
            if path.is_empty() {
                return Err(Error::Syntax {
                    pos: begin,
                    msg: "empty path".into(),
                });
            }
            let m = self.resolver.resolve(&path)?;
            return Ok(KnotExpr::Literal(SeifertKnot::new(m)?));
        }
        if self.keyword("T") {
            self.expect(b'(')?;
            let p = self.int()?;
            self.expect(b',')?;
            let q = self.int()?;
            self.expect(b')')?;
            return KnotExpr::torus(p, q);
        }
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let e = self.expr()?;
            self.expect(b')')?;
            return Ok(e);
        }
        self.pos = start;
        Err(self.err("expected T(p,q), mirror(...), seifert(...) or '('"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct NoFiles;
    impl MatrixResolver for NoFiles {
        fn resolve(&self, path: &str) -> Result<IntMatrix> {
            match path {
                "trefoil.json" => Ok(IntMatrix::from_rows(&[[-1, 1], [0, -1]])),
                "bad.json" => Ok(IntMatrix::from_rows(&[[1, 0], [0, 1]])),
                _ => Err(Error::invalid(format!("no such matrix {path}"))),
            }
        }
    }

    fn parse(s: &str) -> Result<KnotExpr> {
        parse_knot_expr_with(s, &NoFiles)
    }

    #[test]
    fn torus() {
        assert_eq!(parse("T(2,3)").unwrap(), KnotExpr::Torus { p: 2, q: 3 });
        assert_eq!(parse("  T ( 2 , 3 ) ").unwrap(), KnotExpr::Torus { p: 2, q: 3 });
    }

    #[test]
    fn footnote_sum_is_left_associated() {
        let e = parse("3*T(2,3) # 3*T(2,5) # T(2,7) # 5*mirror(T(2,9))").unwrap();
        let t = |q| KnotExpr::Torus { p: 2, q };
        let expected = t(3)
            .times(3)
            .sum(t(5).times(3))
            .sum(t(7))
            .sum(t(9).mirror().times(5));
        assert_eq!(e, expected);
        assert_eq!(e.to_string(), "3*T(2,3) # 3*T(2,5) # T(2,7) # 5*mirror(T(2,9))");
    }

    #[test]
    fn non_coprime() {
        assert!(matches!(parse("T(2,4)"), Err(Error::NotCoprime { p: 2, q: 4 })));
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse("T(2,3) # ") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 9),
            other => panic!("{other:?}"),
        }
        match parse("T(2,3) T(2,5)") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 7),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("3 T(2,3)"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("mirror(T(2,3)"), Err(Error::Syntax { .. })));
        assert!(matches!(parse(""), Err(Error::Syntax { pos: 0, .. })));
    }

    #[test]
    fn literals() {
        let e = parse("seifert( trefoil.json ) # (T(2,3))").unwrap();
        match e {
            KnotExpr::Sum(a, _) => assert!(matches!(*a, KnotExpr::Literal(_))),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse("seifert(bad.json)"),
            Err(Error::NotKnotSeifert(_))
        ));
        assert!(parse("seifert(missing.json)").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "T(2,3)",
            "2*(T(2,3) # T(2,5))",
            "mirror(T(2,3) # T(2,5)) # 0*T(2,7)",
        ] {
            let e = parse(s).unwrap();
            assert_eq!(parse(&e.to_string()).unwrap(), e);
        }
    }
}
