//! Expression parsing for tropical polynomials.
//!
//! Grammar: `+` is the tropical sum, `*` (or juxtaposition) the tropical
//! product, `^` an integer (possibly negative) power, and a bare rational is
//! a constant term. Variables are `x, y, z` or `x1..x9`; the two styles do
//! not mix. Coefficients are exact rationals like `3` or `-1/2`.

use std::collections::BTreeSet;
use std::fmt;

use num::{BigInt, Zero};

use crate::poly::TropPoly;
use crate::scalar::Rat;

/// A parsed polynomial together with its source text and variable table.
#[derive(Debug, Clone)]
pub struct PolyExpr {
    pub source: String,
    pub poly: TropPoly,
    pub var_names: Vec<String>,
}

/// Parse-time errors; these map to CLI usage errors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprError {
    Syntax { pos: usize, msg: String },
    UnknownVariable { pos: usize, name: String },
    MixedVariableStyles,
    VariableCountMismatch { needed: usize, given: usize },
    NonMonomialNegativePower { pos: usize },
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprError::Syntax { pos, msg } => write!(f, "syntax error at {pos}: {msg}"),
            ExprError::UnknownVariable { pos, name } => {
                write!(f, "unknown variable `{name}` at {pos}")
            }
            ExprError::MixedVariableStyles => {
                write!(f, "cannot mix x/y/z variables with x1..x9 variables")
            }
            ExprError::VariableCountMismatch { needed, given } => {
                write!(f, "expression needs {needed} variables but {given} were given")
            }
            ExprError::NonMonomialNegativePower { pos } => {
                write!(f, "negative power of a non-monomial at {pos}")
            }
        }
    }
}

impl std::error::Error for ExprError {}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(Rat),
    Ident(String),
    Plus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push((Token::Plus, i));
                i += 1;
            }
            '*' => {
                out.push((Token::Star, i));
                i += 1;
            }
            '^' => {
                out.push((Token::Caret, i));
                i += 1;
            }
            '(' => {
                out.push((Token::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Token::RParen, i));
                i += 1;
            }
            '-' | '0'..='9' => {
                let start = i;
                if c == '-' {
                    i += 1;
                    if i >= bytes.len() || !(bytes[i] as char).is_ascii_digit() {
                        return Err(ExprError::Syntax {
                            pos: start,
                            msg: "expected digits after `-`".into(),
                        });
                    }
                }
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                let numer: BigInt = text[start..i].parse().expect("digits");
                let mut denom = BigInt::from(1);
                if i < bytes.len() && bytes[i] as char == '/' {
                    let slash = i;
                    i += 1;
                    let dstart = i;
                    while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                        i += 1;
                    }
                    if dstart == i {
                        return Err(ExprError::Syntax {
                            pos: slash,
                            msg: "expected digits after `/`".into(),
                        });
                    }
                    denom = text[dstart..i].parse().expect("digits");
                    if denom.is_zero() {
                        return Err(ExprError::Syntax {
                            pos: dstart,
                            msg: "zero denominator".into(),
                        });
                    }
                }
                out.push((Token::Num(Rat::new(numer, denom)), start));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                i += 1;
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                out.push((Token::Ident(text[start..i].to_string()), start));
            }
            other => {
                return Err(ExprError::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum Ast {
    Num(Rat),
    Var(String, usize),
    Pow(Box<Ast>, i64, usize),
    Mul(Vec<Ast>),
    Add(Vec<Ast>),
}

struct Parser<'a> {
    tokens: &'a [(Token, usize)],
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<&(Token, usize)> {
        let t = self.tokens.get(self.pos);
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Ast, ExprError> {
        let mut parts = vec![self.term()?];
        while matches!(self.peek(), Some(Token::Plus)) {
            self.bump();
            parts.push(self.term()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Ast::Add(parts) })
    }

    fn term(&mut self) -> Result<Ast, ExprError> {
        let mut parts = vec![self.factor()?];
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.bump();
                    parts.push(self.factor()?);
                }
                // Juxtaposition: a factor can start right away.
                Some(Token::Ident(_)) | Some(Token::LParen) => {
                    parts.push(self.factor()?);
                }
                _ => break,
            }
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Ast::Mul(parts) })
    }

    fn factor(&mut self) -> Result<Ast, ExprError> {
        let base = self.base()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            let caret_pos = self.here();
            self.bump();
            match self.bump() {
                Some((Token::Num(r), pos)) => {
                    if !r.is_integer() {
                        return Err(ExprError::Syntax {
                            pos: *pos,
                            msg: "exponent must be an integer".into(),
                        });
                    }
                    let e: i64 = r.to_integer().try_into().map_err(|_| ExprError::Syntax {
                        pos: *pos,
                        msg: "exponent out of range".into(),
                    })?;
                    Ok(Ast::Pow(Box::new(base), e, *pos))
                }
                _ => Err(ExprError::Syntax {
                    pos: caret_pos,
                    msg: "expected integer exponent after `^`".into(),
                }),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Ast, ExprError> {
        let pos = self.here();
        match self.bump().cloned() {
            Some((Token::Num(r), _)) => Ok(Ast::Num(r)),
            Some((Token::Ident(name), p)) => Ok(Ast::Var(name, p)),
            Some((Token::LParen, open)) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some((Token::RParen, _)) => Ok(inner),
                    _ => Err(ExprError::Syntax { pos: open, msg: "unbalanced `(`".into() }),
                }
            }
            _ => Err(ExprError::Syntax { pos, msg: "expected a rational, variable or `(`".into() }),
        }
    }
}

fn collect_vars(ast: &Ast, out: &mut BTreeSet<String>) {
    match ast {
        Ast::Num(_) => {}
        Ast::Var(name, _) => {
            out.insert(name.clone());
        }
        Ast::Pow(inner, _, _) => collect_vars(inner, out),
        Ast::Mul(parts) | Ast::Add(parts) => {
            for p in parts {
                collect_vars(p, out);
            }
        }
    }
}

/// Resolve variable names to indices and the total variable count.
fn variable_table(
    names: &BTreeSet<String>,
    forced_n: Option<usize>,
) -> Result<(usize, Vec<String>), ExprError> {
    let xyz = ["x", "y", "z"];
    let style_a = names.iter().all(|n| xyz.contains(&n.as_str()));
    let style_b = names.iter().all(|n| {
        n.len() == 2 && n.starts_with('x') && n.as_bytes()[1].is_ascii_digit() && n != "x0"
    });
    let min_n = if names.is_empty() {
        0
    } else if style_a {
        names
            .iter()
            .map(|n| xyz.iter().position(|v| v == n).unwrap() + 1)
            .max()
            .unwrap()
    } else if style_b {
        names.iter().map(|n| (n.as_bytes()[1] - b'0') as usize).max().unwrap()
    } else if names.iter().all(|n| xyz.contains(&n.as_str()) || n.starts_with('x')) {
        return Err(ExprError::MixedVariableStyles);
    } else {
        let bad = names
            .iter()
            .find(|n| !xyz.contains(&n.as_str()) && !n.starts_with('x'))
            .unwrap();
        return Err(ExprError::UnknownVariable { pos: 0, name: bad.clone() });
    };
    let n = match forced_n {
        Some(given) => {
            if given < min_n {
                return Err(ExprError::VariableCountMismatch { needed: min_n, given });
            }
            given
        }
        None => min_n.max(1),
    };
    let table = if style_a && n <= 3 {
        TropPoly::default_var_names(n)
    } else if style_a {
        // Forced high count keeps canonical x1..xn naming.
        TropPoly::default_var_names(n)
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    };
    Ok((n, table))
}

fn var_index(name: &str, n: usize) -> Option<usize> {
    let idx = match name {
        "x" => 0,
        "y" => 1,
        "z" => 2,
        _ => {
            if name.len() == 2 && name.starts_with('x') {
                (name.as_bytes()[1] as usize).checked_sub(b'1' as usize)?
            } else {
                return None;
            }
        }
    };
    (idx < n).then_some(idx)
}

fn eval(ast: &Ast, n: usize) -> Result<TropPoly, ExprError> {
    match ast {
        Ast::Num(r) => Ok(TropPoly::constant(n, r.clone())),
        Ast::Var(name, pos) => {
            let idx = var_index(name, n)
                .ok_or_else(|| ExprError::UnknownVariable { pos: *pos, name: name.clone() })?;
            let mut exps = vec![0i64; n];
            exps[idx] = 1;
            Ok(TropPoly::monomial(n, exps, Rat::zero()))
        }
        Ast::Pow(inner, e, pos) => {
            let base = eval(inner, n)?;
            if *e == 0 {
                return Ok(TropPoly::one(n));
            }
            if *e > 0 {
                return Ok(base.power(*e as u32).expect("same n"));
            }
            // Negative powers only make sense for monomials (Laurent terms).
            if !base.is_monomial() {
                return Err(ExprError::NonMonomialNegativePower { pos: *pos });
            }
            let (exps, coeff) = base.term_vec().pop().expect("monomial");
            let scaled: Vec<i64> = exps.iter().map(|k| k * e).collect();
            Ok(TropPoly::monomial(n, scaled, coeff * Rat::from_integer((*e).into())))
        }
        Ast::Mul(parts) => {
            let mut acc = TropPoly::one(n);
            for p in parts {
                acc = acc.mul(&eval(p, n)?).expect("same n");
            }
            Ok(acc)
        }
        Ast::Add(parts) => {
            let mut acc = TropPoly::zero(n);
            for p in parts {
                acc = acc.add(&eval(p, n)?).expect("same n");
            }
            Ok(acc)
        }
    }
}

/// Parse one polynomial. `forced_n` pins the variable count (e.g. `--vars`).
pub fn parse_poly(text: &str, forced_n: Option<usize>) -> Result<PolyExpr, ExprError> {
    let mut parsed = parse_polys(&[text], forced_n)?;
    Ok(parsed.pop().expect("one"))
}

/// Parse several polynomials over a shared variable table so that they all
/// end up with the same variable count.
pub fn parse_polys(texts: &[&str], forced_n: Option<usize>) -> Result<Vec<PolyExpr>, ExprError> {
    let mut asts = Vec::with_capacity(texts.len());
    let mut names = BTreeSet::new();
    for text in texts {
        let tokens = tokenize(text)?;
        if tokens.is_empty() {
            return Err(ExprError::Syntax { pos: 0, msg: "empty expression".into() });
        }
        let mut parser = Parser { tokens: &tokens, pos: 0, end: text.len() };
        let ast = parser.expr()?;
        if parser.pos != tokens.len() {
            return Err(ExprError::Syntax {
                pos: parser.here(),
                msg: "unexpected trailing input".into(),
            });
        }
        collect_vars(&ast, &mut names);
        asts.push(ast);
    }
    let (n, table) = variable_table(&names, forced_n)?;
    texts
        .iter()
        .zip(asts)
        .map(|(text, ast)| {
            Ok(PolyExpr {
                source: text.to_string(),
                poly: eval(&ast, n)?,
                var_names: table.clone(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};
    use crate::scalar::TropScalar;

    #[test]
    fn parses_basic_forms() {
        let f = parse_poly("x^2*y + x + 0", None).unwrap().poly;
        assert_eq!(f.n(), 2);
        assert_eq!(f.num_terms(), 3);
        assert_eq!(f.coeff(&[2, 1]), TropScalar::finite(0));
        // Duplicate exponents merge by max.
        let g = parse_poly("x + x", None).unwrap().poly;
        assert_eq!(g.num_terms(), 1);
        // Conic at alpha = 1.
        let h = parse_poly("x^2 + y^2 + 1*x*y + 0", None).unwrap().poly;
        assert_eq!(h.coeff(&[1, 1]), TropScalar::finite(1));
    }

    #[test]
    fn rationals_negative_exponents_juxtaposition() {
        let f = parse_poly("-1/2*x^-2 y", None).unwrap().poly;
        assert_eq!(f.coeff(&[-2, 1]), TropScalar::Finite(ratio(-1, 2)));
        let g = parse_poly("(x + 0)^2", None).unwrap().poly;
        assert_eq!(g, parse_poly("x^2 + x + 0", None).unwrap().poly);
        let c = parse_poly("3^2", None).unwrap().poly;
        assert_eq!(c.coeff(&[0]), TropScalar::finite(6));
    }

    #[test]
    fn indexed_variables_and_forced_count() {
        let f = parse_poly("x1*x4 + 0", None).unwrap().poly;
        assert_eq!(f.n(), 4);
        let g = parse_poly("x + y", Some(3)).unwrap().poly;
        assert_eq!(g.n(), 3);
        assert!(matches!(
            parse_poly("x + y + z", Some(2)),
            Err(ExprError::VariableCountMismatch { needed: 3, given: 2 })
        ));
        assert!(matches!(parse_poly("x1 + y", None), Err(ExprError::MixedVariableStyles)));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert!(matches!(parse_poly("x +", None), Err(ExprError::Syntax { pos: 3, .. })));
        assert!(matches!(parse_poly("x ^ w", None), Err(ExprError::Syntax { .. })));
        assert!(matches!(
            parse_poly("(x + y)^-1", None),
            Err(ExprError::NonMonomialNegativePower { .. })
        ));
        assert!(matches!(parse_poly("w + 0", None), Err(ExprError::UnknownVariable { .. })));
    }

    #[test]
    fn shared_table_spans_all_inputs() {
        let polys = parse_polys(&["x^2 + 0", "x + y"], None).unwrap();
        assert_eq!(polys[0].poly.n(), 2);
        assert_eq!(polys[1].poly.n(), 2);
        assert_eq!(polys[0].poly.coeff(&[2, 0]), TropScalar::Finite(rat(0)));
    }
}
