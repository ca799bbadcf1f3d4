use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::ff::{Field, FieldError};
use crate::skew::{parse_matrix_at, SkewMatrix, SkewPoly};
use crate::text::{parse_t_poly, Cursor, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("line {line}, column {col}: {source}")]
    Field { line: usize, col: usize, source: FieldError },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Detail {
    Summary,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProblemOptions {
    /// `u` in `psi^u`; a unit mod `p`.
    pub psi_exponent: u32,
    pub max_ext_degree: u32,
    pub detail: Detail,
}

impl Default for ProblemOptions {
    fn default() -> Self {
        ProblemOptions { psi_exponent: 1, max_ext_degree: 64, detail: Detail::Summary }
    }
}

/// A field, a matrix of skew polynomials over it, and run options.
///
/// Text form: `p=3 n=2 mod=t^2+1 | [(t+1)*F^2 - F^-1] | psi=2 max_ext=32 detail=full`.
/// The modulus defaults to the smallest irreducible one and the trailing
/// options segment is optional.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub field: Field,
    pub matrix: SkewMatrix,
    pub options: ProblemOptions,
}

impl Problem {
    pub fn new(matrix: SkewMatrix) -> Self {
        Problem { field: matrix.field().clone(), matrix, options: ProblemOptions::default() }
    }
}

fn key_value<'a>(cur: &mut Cursor<'a>, keys: &[&str]) -> Result<Option<&'a str>, SyntaxError> {
    let start = cur.pos();
    let Some(word) = cur.word() else { return Ok(None) };
    if !keys.contains(&word) {
        return Err(cur.error_at(start, format!("one of {}", keys.join(", "))));
    }
    cur.expect('=')?;
    Ok(Some(word))
}

fn small_uint(cur: &mut Cursor<'_>) -> Result<u32, SyntaxError> {
    let start = cur.pos();
    let v = cur.uint()?;
    u32::try_from(v).map_err(|_| cur.error_at(start, "an integer below 2^32"))
}

fn parse_field(cur: &mut Cursor<'_>) -> Result<Field, ProblemError> {
    let start = cur.pos();
    let (mut p, mut n, mut modulus) = (None, None, None);
    while let Some(key) = key_value(cur, &["p", "n", "mod"])? {
        match key {
            "p" => p = Some(small_uint(cur)?),
            "n" => n = Some(small_uint(cur)? as usize),
            _ => modulus = Some(parse_t_poly(cur)?),
        }
    }
    let p = p.ok_or_else(|| cur.error_at(start, "'p=<prime>'"))?;
    let n = n.unwrap_or(1);
    let modulus: Option<Vec<u32>> =
        modulus.map(|m| m.iter().map(|c| c.rem_euclid(p.max(1) as i64) as u32).collect());
    Field::new(p, n, modulus.as_deref()).map_err(|source| {
        let e = cur.error_at(start, "");
        ProblemError::Field { line: e.line, col: e.col, source }
    })
}

fn parse_options(cur: &mut Cursor<'_>, p: u32) -> Result<ProblemOptions, SyntaxError> {
    let mut opts = ProblemOptions::default();
    while let Some(key) = key_value(cur, &["psi", "max_ext", "detail"])? {
        let start = cur.pos();
        match key {
            "psi" => {
                let u = small_uint(cur)?;
                if u % p == 0 {
                    return Err(cur.error_at(start, "a psi exponent prime to p"));
                }
                opts.psi_exponent = u % p;
            }
            "max_ext" => {
                opts.max_ext_degree = small_uint(cur)?;
                if opts.max_ext_degree == 0 {
                    return Err(cur.error_at(start, "a positive degree"));
                }
            }
            _ => {
                opts.detail = match cur.word() {
                    Some("summary") => Detail::Summary,
                    Some("full") => Detail::Full,
                    _ => return Err(cur.error_at(start, "'summary' or 'full'")),
                }
            }
        }
    }
    Ok(opts)
}

/// Parses the text form of a problem.
pub fn parse_problem(text: &str) -> Result<Problem, ProblemError> {
    let mut cur = Cursor::new(text);
    cur.skip_ws(true);
    let field = parse_field(&mut cur)?;
    cur.skip_ws(true);
    cur.expect('|')?;
    let matrix = parse_matrix_at(&mut cur, &field)?;
    cur.skip_ws(true);
    let options = if cur.eat('|') { parse_options(&mut cur, field.p())? } else { ProblemOptions::default() };
    cur.skip_ws(true);
    if !cur.at_end() {
        return Err(cur.error("'|' or end of input").into());
    }
    Ok(Problem { field, matrix, options })
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, n) = (self.field.p(), self.field.n());
        let standard = Field::standard(p, n).is_ok_and(|s| s == self.field);
        if standard {
            write!(f, "p={p} n={n}")?;
        } else {
            f.write_str(&self.field.spec_string())?;
        }
        write!(f, " | {}", self.matrix)?;
        let d = ProblemOptions::default();
        let o = &self.options;
        let mut extra = Vec::new();
        if o.psi_exponent != d.psi_exponent {
            extra.push(format!("psi={}", o.psi_exponent));
        }
        if o.max_ext_degree != d.max_ext_degree {
            extra.push(format!("max_ext={}", o.max_ext_degree));
        }
        if o.detail != d.detail {
            extra.push("detail=full".to_string());
        }
        if !extra.is_empty() {
            write!(f, " | {}", extra.join(" "))?;
        }
        Ok(())
    }
}

/// A random skew polynomial with at most `max_terms` terms and exponents in
/// `lo..=hi`.
pub fn random_poly<R: Rng>(rng: &mut R, field: &Field, lo: i64, hi: i64, max_terms: usize) -> SkewPoly {
    let size = field.size().expect("small field");
    let k = rng.gen_range(1..=max_terms);
    let terms: Vec<_> = (0..k).map(|_| (rng.gen_range(lo..=hi), field.element_at(rng.gen_range(0..size)))).collect();
    SkewPoly::from_terms(field, terms)
}

/// A random problem over one of the given fields, up to `max_dim` square
/// or rectangular, with random options.
pub fn random_problem<R: Rng>(rng: &mut R, fields: &[Field], max_dim: usize) -> Problem {
    let field = fields[rng.gen_range(0..fields.len())].clone();
    let (rows, cols) = (rng.gen_range(1..=max_dim), rng.gen_range(1..=max_dim));
    let entries = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| if rng.gen_bool(0.2) { SkewPoly::zero(&field) } else { random_poly(rng, &field, -3, 3, 3) })
                .collect()
        })
        .collect();
    let p = field.p();
    let options = ProblemOptions {
        psi_exponent: if p > 2 && rng.gen_bool(0.3) { rng.gen_range(2..p) } else { 1 },
        max_ext_degree: if rng.gen_bool(0.2) { rng.gen_range(1..=128) } else { 64 },
        detail: if rng.gen_bool(0.2) { Detail::Full } else { Detail::Summary },
    };
    Problem { matrix: SkewMatrix::from_rows(&field, entries), field, options }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skew::{parse_matrix, parse_poly};
    use rand::SeedableRng;

    #[test]
    fn grammar_examples() {
        let pr = parse_problem("p=3 n=1 | [F - 1]").unwrap();
        assert_eq!(pr.matrix, SkewMatrix::single(parse_poly(&Field::prime(3).unwrap(), "F - 1").unwrap()));
        let pr = parse_problem("p=2 n=1 | [F^2 - 1, 0; 0, F - 1]").unwrap();
        assert_eq!((pr.matrix.rows(), pr.matrix.cols()), (2, 2));
        assert!(pr.matrix.is_diagonal());
        let pr = parse_problem("p=3 n=2 mod=t^2+1 | [(t+1)*F^2 - F^-1]").unwrap();
        let f9 = Field::new(3, 2, Some(&[1, 0, 1])).unwrap();
        let hand = SkewPoly::from_terms(&f9, [(2, f9.element(&[1, 1])), (-1, -&f9.one())]);
        assert_eq!(pr.matrix, SkewMatrix::single(hand.clone()));
        assert_eq!((hand.min_exp(), hand.max_exp()), (Some(-1), Some(2)));
    }

    #[test]
    fn options_and_printing() {
        let pr = parse_problem("p=5 | [F - 2] | psi=3 detail=full").unwrap();
        assert_eq!(pr.options.psi_exponent, 3);
        assert_eq!(pr.options.detail, Detail::Full);
        assert_eq!(pr.to_string(), "p=5 n=1 | [3 + F] | psi=3 detail=full");
        let f = Field::prime(5).unwrap();
        assert_eq!(pr.matrix, parse_matrix(&f, "[F + 3]").unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_problem("p=3 n=1 [F - 1]").unwrap_err();
        assert!(matches!(e, ProblemError::Syntax(SyntaxError { line: 1, col: 9, .. })), "{e}");
        let e = parse_problem("p=2 n=2 mod=t^2+1 | [F]").unwrap_err();
        assert!(matches!(e, ProblemError::Field { source: FieldError::ReducibleModulus, .. }));
        let e = parse_problem("p=3 | [F] | psi=3").unwrap_err();
        assert!(e.to_string().contains("prime to p"), "{e}");
        let e = parse_problem("p=3 |\n[F,\n F ^ ]").unwrap_err();
        assert!(matches!(e, ProblemError::Syntax(SyntaxError { line: 3, .. })), "{e}");
    }

    #[test]
    fn random_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let fields = [Field::prime(2).unwrap(), Field::standard(3, 2).unwrap(), Field::new(3, 2, Some(&[2, 2, 1])).unwrap()];
        for _ in 0..200 {
            let pr = random_problem(&mut rng, &fields, 3);
            let text = pr.to_string();
            assert_eq!(parse_problem(&text).unwrap(), pr, "{text}");
        }
    }
}
