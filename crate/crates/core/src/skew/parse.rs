use std::fmt;

use super::{SkewMatrix, SkewPoly};
use crate::ff::{poly_to_string, FFElem, Field};
use crate::text::{int_coeff, parse_sum, parse_t_poly, Coeff, Cursor, SyntaxError};

fn coeff_string(c: &FFElem) -> Option<String> {
    let p = c.field().p();
    match c.prime_value() {
        Some(1) => None,
        Some(v) if v == p - 1 => Some("-".to_string()),
        Some(v) => Some(v.to_string()),
        None => Some(format!("({})", poly_to_string(c.coeffs()))),
    }
}

impl fmt::Display for SkewPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms().enumerate() {
            let coeff = coeff_string(c);
            let negative = coeff.as_deref() == Some("-");
            if i > 0 {
                f.write_str(if negative { " - " } else { " + " })?;
            } else if negative {
                f.write_str("-")?;
            }
            let coeff = if negative { None } else { coeff };
            match (coeff, k) {
                (None, 0) => f.write_str("1")?,
                (Some(c), 0) => f.write_str(&c)?,
                (Some(c), _) => write!(f, "{c}*")?,
                (None, _) => {}
            }
            match k {
                0 => {}
                1 => f.write_str("F")?,
                _ => write!(f, "F^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for SkewMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows() {
            if i > 0 {
                f.write_str("; ")?;
            }
            for j in 0..self.cols() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        f.write_str("]")
    }
}

fn skew_coeff(field: &Field) -> impl FnMut(&mut Cursor<'_>) -> Result<Option<Coeff>, SyntaxError> + '_ {
    move |cur| {
        if cur.peek() == Some('(') {
            cur.eat('(');
            let start = cur.pos();
            let coeffs = parse_t_poly(cur)?;
            if coeffs.len() > field.n() && coeffs[field.n()..].iter().any(|&c| c.rem_euclid(field.p() as i64) != 0) {
                return Err(cur.error_at(start, format!("a polynomial in t of degree below {}", field.n())));
            }
            cur.expect(')')?;
            let n = field.n().min(coeffs.len());
            Ok(Some(Coeff::Elem(field.element(&coeffs[..n]))))
        } else {
            Ok(int_coeff(cur)?.map(Coeff::Int))
        }
    }
}

pub(crate) fn parse_poly_at(cur: &mut Cursor<'_>, field: &Field) -> Result<SkewPoly, SyntaxError> {
    let terms = parse_sum(cur, 'F', true, skew_coeff(field))?;
    Ok(SkewPoly::from_terms(field, terms.into_iter().map(|(c, e)| (e, c.into_elem(field)))))
}

pub(crate) fn parse_matrix_at(cur: &mut Cursor<'_>, field: &Field) -> Result<SkewMatrix, SyntaxError> {
    cur.skip_ws(true);
    cur.expect('[')?;
    let mut rows: Vec<Vec<SkewPoly>> = vec![Vec::new()];
    loop {
        cur.skip_ws(true);
        rows.last_mut().unwrap().push(parse_poly_at(cur, field)?);
        cur.skip_ws(true);
        if cur.eat(',') {
            continue;
        }
        if cur.eat(';') {
            let width = rows[0].len();
            if rows.last().unwrap().len() != width {
                return Err(cur.error(format!("{width} entries in every row")));
            }
            rows.push(Vec::new());
            continue;
        }
        let width = rows[0].len();
        if rows.last().unwrap().len() != width {
            return Err(cur.error(format!("{width} entries in every row")));
        }
        cur.expect(']').map_err(|_| cur.error("',', ';' or ']'"))?;
        break;
    }
    Ok(SkewMatrix::from_rows(field, rows))
}

/// Parses a skew polynomial, e.g. `(t+1)*F^2 - F^-1 + 2`.
pub fn parse_poly(field: &Field, text: &str) -> Result<SkewPoly, SyntaxError> {
    let mut cur = Cursor::new(text);
    let f = parse_poly_at(&mut cur, field)?;
    if !cur.at_end() {
        return Err(cur.error("'+', '-' or end of input"));
    }
    Ok(f)
}

/// Parses a bracketed matrix, e.g. `[F^2 - 1, 0; 0, F - 1]`.
pub fn parse_matrix(field: &Field, text: &str) -> Result<SkewMatrix, SyntaxError> {
    let mut cur = Cursor::new(text);
    let m = parse_matrix_at(&mut cur, field)?;
    cur.skip_ws(true);
    if !cur.at_end() {
        return Err(cur.error("end of input"));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prints_in_ascending_order() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(SkewPoly::from_ints(&f3, 0, &[-1, 1]).to_string(), "-1 + F");
        assert_eq!(SkewPoly::from_ints(&f3, -1, &[1, 0, 1]).to_string(), "F^-1 + F");
        assert_eq!(SkewPoly::zero(&f3).to_string(), "0");
        let f5 = Field::prime(5).unwrap();
        assert_eq!(SkewPoly::from_ints(&f5, 0, &[2, 0, 3]).to_string(), "2 + 3*F^2");
        let f9 = Field::standard(3, 2).unwrap();
        let g = SkewPoly::from_terms(&f9, [(2, f9.element(&[1, 1])), (-1, f9.from_int(-1))]);
        assert_eq!(g.to_string(), "-F^-1 + (t+1)*F^2");
    }

    #[test]
    fn parses_grammar_examples() {
        let f9 = Field::standard(3, 2).unwrap();
        let g = parse_poly(&f9, "(t+1)*F^2 - F^-1").unwrap();
        assert_eq!(g, SkewPoly::from_terms(&f9, [(2, f9.element(&[1, 1])), (-1, f9.from_int(-1))]));
        assert_eq!((g.min_exp(), g.max_exp()), (Some(-1), Some(2)));
        let h = parse_poly(&f9, "(t+1)*F^2 - F^-1 + 2").unwrap();
        assert_eq!(h.coeff(0), f9.from_int(2));
        let f2 = Field::prime(2).unwrap();
        let m = parse_matrix(&f2, "[F^2 - 1, 0; 0, F - 1]").unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 2));
        assert!(m.is_diagonal());
        assert_eq!(m.get(0, 0), &SkewPoly::from_ints(&f2, 0, &[1, 0, 1]));
    }

    #[test]
    fn round_trips() {
        let f9 = Field::standard(3, 2).unwrap();
        for text in ["0", "-1 + F", "-F^-3 + (2*t)*F + F^4", "(t+2)", "-F^-1 + (t+1)*F^2"] {
            let g = parse_poly(&f9, text).unwrap();
            assert_eq!(g.to_string(), text);
            assert_eq!(parse_poly(&f9, &g.to_string()).unwrap(), g);
        }
        let m = parse_matrix(&f9, "[F, 1; 0, -1 + F]").unwrap();
        assert_eq!(parse_matrix(&f9, &m.to_string()).unwrap(), m);
    }

    #[test]
    fn reports_positions() {
        let f3 = Field::prime(3).unwrap();
        let err = parse_poly(&f3, "F + * 2").unwrap_err();
        assert_eq!((err.line, err.col), (1, 5));
        let err = parse_matrix(&f3, "[F, 1;\n 0]").unwrap_err();
        assert_eq!(err.line, 2);
        let f9 = Field::standard(3, 2).unwrap();
        assert!(parse_poly(&f9, "(t^2)*F").is_err());
    }
}
