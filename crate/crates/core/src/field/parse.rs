//! Text form of tower elements.
//!
//! Grammar (standard precedence, `^` binds tightest, unary minus below `^`):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' '-'? integer)?
//! atom   := integer | 'alpha' | 'u' | <transcendental> | '(' expr ')'
//! ```
//!
//! Emission is canonical and expanded: a sum over descending powers of `u`
//! whose coefficients are reduced fractions of polynomials in `t` with
//! coefficients in `Q(alpha)`. Emitted strings re-parse to the same element.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::factor::Nf;
use super::tower::{FieldElem, FieldTower, Ft};
use super::{rat_to_string, Poly, Rat, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Int(text.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else if c == '\u{2212}' {
            out.push(Tok::Sym('-'));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    tower: &'a FieldTower,
    src: &'a str,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse(format!("{msg} in {:?}", self.src)))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<FieldElem> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc + self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<FieldElem> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc * self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                match d.inv() {
                    Some(di) => acc = acc * di,
                    None => return self.err("division by zero"),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<FieldElem> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<FieldElem> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let Some(Tok::Int(n)) = self.peek().cloned() else {
            return self.err("expected integer exponent");
        };
        self.pos += 1;
        let Ok(e) = i64::try_from(n) else {
            return self.err("exponent too large");
        };
        if neg {
            match base.inv() {
                Some(b) => Ok(b.pow(e as u64)),
                None => self.err("negative power of zero"),
            }
        } else {
            Ok(base.pow(e as u64))
        }
    }

    fn atom(&mut self) -> Result<FieldElem> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(self.tower.rat(Rat::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "alpha" {
                    Ok(self.tower.alpha())
                } else if name == "u" {
                    self.tower.u().map_err(|_| Error::Parse(format!("u is undefined in {:?}", self.src)))
                } else if self.tower.transcendental() == Some(name.as_str()) {
                    self.tower.t()
                } else {
                    self.err(&format!("unknown symbol {name:?}"))
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            _ => self.err("expected a number, symbol or '('"),
        }
    }
}

/// Parses an element of the tower.
pub fn parse_elem(tower: &FieldTower, s: &str) -> Result<FieldElem> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, tower, src: s };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(tower.normalize(&e))
}

/// Parses an element of `F(t)`, rejecting `u`.
pub fn parse_ft(tower: &FieldTower, s: &str) -> Result<Ft> {
    let e = parse_elem(tower, s)?;
    tower.as_ft(&e).ok_or_else(|| Error::Parse(format!("{s:?} is not free of u")))
}

fn join_terms(terms: &[String]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = terms[0].clone();
    for t in &terms[1..] {
        match t.strip_prefix('-') {
            Some(rest) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            None => {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
    }
    out
}

fn monomial(var: &str, k: usize) -> String {
    if k == 1 {
        var.to_string()
    } else {
        format!("{var}^{k}")
    }
}

/// `coeff * var^k` where the coefficient is given by its terms.
fn scaled(coeff_terms: Vec<String>, var: &str, k: usize) -> String {
    if k == 0 {
        return join_terms(&coeff_terms);
    }
    let mono = monomial(var, k);
    if coeff_terms.len() == 1 {
        match coeff_terms[0].as_str() {
            "1" => return mono,
            "-1" => return format!("-{mono}"),
            c => return format!("{c}*{mono}"),
        }
    }
    format!("({})*{mono}", join_terms(&coeff_terms))
}

fn nf_terms(c: &Nf) -> Vec<String> {
    let v = c.value();
    (0..v.coeffs().len())
        .rev()
        .filter(|&k| !v.coeff(k).is_zero())
        .map(|k| scaled(vec![rat_to_string(&v.coeff(k))], "alpha", k))
        .collect()
}

fn poly_terms(p: &Poly<Nf>, var: &str) -> Vec<String> {
    let mut out = Vec::new();
    for k in (0..p.coeffs().len()).rev() {
        let c = p.coeff(k);
        if c.is_zero() {
            continue;
        }
        let ct = nf_terms(&c);
        if k == 0 {
            out.extend(ct);
        } else {
            out.push(scaled(ct, var, k));
        }
    }
    out
}

fn ft_terms(f: &Ft, var: &str) -> Vec<String> {
    let num = poly_terms(f.num(), var);
    if f.den().is_one() {
        return num;
    }
    let wrap = |ts: Vec<String>| {
        if ts.len() == 1 {
            ts[0].clone()
        } else {
            format!("({})", join_terms(&ts))
        }
    };
    let n = wrap(num);
    let d = wrap(poly_terms(f.den(), var));
    let n = if n.contains('/') && !n.starts_with('(') { format!("({n})") } else { n };
    vec![format!("{n}/{d}")]
}

/// Canonical text of an element of `F`.
pub fn format_nf(c: &Nf) -> String {
    join_terms(&nf_terms(c))
}

/// Canonical text of an element of `F(t)`.
pub fn format_ft(tower: &FieldTower, f: &Ft) -> String {
    join_terms(&ft_terms(f, tower.transcendental().unwrap_or("t")))
}

/// Canonical text of an element of the tower.
pub fn format_elem(tower: &FieldTower, e: &FieldElem) -> String {
    let var = tower.transcendental().unwrap_or("t");
    let v = e.value();
    let mut out = Vec::new();
    for k in (0..v.coeffs().len()).rev() {
        let c = v.coeff(k);
        if c.is_zero() {
            continue;
        }
        let ts = ft_terms(&c, var);
        if k == 0 {
            out.extend(ts);
        } else if !c.den().is_one() && ts.len() == 1 {
            out.push(format!("({})*{}", ts[0], monomial("u", k)));
        } else {
            out.push(scaled(ts, "u", k));
        }
    }
    join_terms(&out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::RatFunc;

    fn tower() -> FieldTower {
        let t = Ft::var();
        let q = |v: &[i64]| Poly::new(v.iter().map(|&c| Rat::from_i64(c)).collect());
        let ext = Poly::new(vec![t.clone() - t.clone() * t, Ft::zero(), Ft::zero(), Ft::one()]);
        FieldTower::new(q(&[1, 1, 1]), vec!["t".into()], Some(ext)).unwrap()
    }

    #[test]
    fn parse_precedence() {
        let k = tower();
        let e = parse_elem(&k, "-t^2 + 3/2*alpha").unwrap();
        let t = k.t().unwrap();
        let expect = -(t.clone() * t) + k.rat(Rat::new(3.into(), 2.into())) * k.alpha();
        assert_eq!(e, expect);
        assert_eq!(parse_elem(&k, "u^3").unwrap(), parse_elem(&k, "t^2 - t").unwrap());
        assert_eq!(parse_elem(&k, "alpha^2 + alpha + 1").unwrap(), k.int(0));
        assert_eq!(parse_elem(&k, "2^-1").unwrap(), k.rat(Rat::new(1.into(), 2.into())));
    }

    #[test]
    fn parse_errors() {
        let k = tower();
        assert!(parse_elem(&k, "s + 1").is_err());
        assert!(parse_elem(&k, "1/(t - t)").is_err());
        assert!(parse_elem(&k, "(t").is_err());
        assert!(parse_elem(&k, "").is_err());
        assert!(parse_elem(&k, "t t").is_err());
    }

    #[test]
    fn emission_round_trips() {
        let k = tower();
        for s in [
            "0",
            "1",
            "-3/2",
            "alpha",
            "-alpha - 1",
            "t/(t - 1)",
            "(alpha*t^2 - 1/3)/(t^2 + alpha)*u^2 - u + 2/t",
            "(t + 1)/t*u",
            "-(3/2*t)/(t - 7)",
            "u^-1",
            "1/(u + t)",
        ] {
            let e = parse_elem(&k, s).unwrap();
            let text = format_elem(&k, &e);
            let back = parse_elem(&k, &text).unwrap();
            assert_eq!(back, e, "{s} -> {text}");
        }
        assert_eq!(format_elem(&k, &parse_elem(&k, "t^2 - alpha*t + 1").unwrap()), "t^2 - alpha*t + 1");
        assert_eq!(format_elem(&k, &parse_elem(&k, "(alpha + 1)*u").unwrap()), "(alpha + 1)*u");
        let f = RatFunc::new(Poly::x(), Poly::x() - Poly::one());
        assert_eq!(format_ft(&k, &f), "t/(t - 1)");
    }
}
