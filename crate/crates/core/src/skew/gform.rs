use super::{SkewMatrix, SkewPoly};
use crate::ff::{embedding, FFElem, FieldError};

/// One monomial `c * x^{p^i} * y^{p^j}` of a [`GForm`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GMonomial {
    pub coeff: FFElem,
    pub x_exp: i64,
    pub y_exp: i64,
}

/// The biadditive form `g` attached to a skew polynomial `f`: the unique
/// element with `g(0,0) = 0` and `g^p - g = f(x) y - x f*(y)`, as an explicit
/// sum of monomials with coefficients in the base field of `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GForm {
    source: SkewPoly,
    monomials: Vec<GMonomial>,
}

impl GForm {
    pub fn source(&self) -> &SkewPoly {
        &self.source
    }

    pub fn monomials(&self) -> &[GMonomial] {
        &self.monomials
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    /// `g(x, y)`; `x` and `y` must share a field containing the base field.
    pub fn eval(&self, x: &FFElem, y: &FFElem) -> Result<FFElem, FieldError> {
        assert!(x.field() == y.field(), "g(x, y) needs x and y in one field");
        let target = x.field();
        let emb = embedding(self.source.field(), target)?;
        let mut acc = target.zero();
        if x.is_zero() || y.is_zero() {
            return Ok(acc);
        }
        for m in &self.monomials {
            let term = &(&emb.apply(&m.coeff) * &x.frobenius(m.x_exp)) * &y.frobenius(m.y_exp);
            acc += &term;
        }
        Ok(acc)
    }
}

/// Builds `g` for `f` term by term; `g` is additive in `f`.
///
/// For `a F^n`:
/// * `n > 0`: `sum_{i=1}^{n} a^{p^{-i}} x^{p^{n-i}} y^{p^{-i}}`
/// * `n = 0`: `0`
/// * `n < 0`: `-sum_{j=0}^{-n-1} a^{p^j} x^{p^{n+j}} y^{p^j}`
pub fn g_form(f: &SkewPoly) -> GForm {
    let mut monomials: Vec<GMonomial> = Vec::new();
    let mut push = |coeff: FFElem, x_exp: i64, y_exp: i64| {
        if let Some(m) = monomials.iter_mut().find(|m| m.x_exp == x_exp && m.y_exp == y_exp) {
            m.coeff += &coeff;
        } else {
            monomials.push(GMonomial { coeff, x_exp, y_exp });
        }
    };
    for (n, a) in f.terms() {
        if n > 0 {
            for i in 1..=n {
                push(a.frobenius(-i), n - i, -i);
            }
        } else if n < 0 {
            for j in 0..-n {
                push(-a.frobenius(j), n + j, j);
            }
        }
    }
    monomials.retain(|m| !m.coeff.is_zero());
    monomials.sort_by_key(|m| (m.x_exp, m.y_exp));
    GForm { source: f.clone(), monomials }
}

/// `g_F(x, y) = sum_{j,i} g_{F(j,i)}(x_i, y_j)` for `x` in `G_a^cols` and
/// `y` in `G_a^rows`.
pub fn g_eval_matrix(m: &SkewMatrix, x: &[FFElem], y: &[FFElem]) -> Result<FFElem, FieldError> {
    assert_eq!(x.len(), m.cols());
    assert_eq!(y.len(), m.rows());
    let target = x.first().or(y.first()).map(|e| e.field().clone()).unwrap_or_else(|| m.field().clone());
    let mut acc = target.zero();
    for (j, yj) in y.iter().enumerate() {
        for (i, xi) in x.iter().enumerate() {
            let e = m.get(j, i);
            if !e.is_zero() {
                acc += &g_form(e).eval(xi, yj)?;
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::Field;

    fn defining_residual(f: &SkewPoly, x: &FFElem, y: &FFElem) -> FFElem {
        let g = g_form(f).eval(x, y).unwrap();
        let lhs = &g.pow(x.field().p() as u64) - &g;
        let rhs = &(&f.evaluate(x).unwrap() * y) - &(x * &f.adjoint().evaluate(y).unwrap());
        &lhs - &rhs
    }

    #[test]
    fn constant_gives_zero_form() {
        let f9 = Field::standard(3, 2).unwrap();
        assert!(g_form(&SkewPoly::constant(f9.generator())).is_zero());
    }

    #[test]
    fn phi_gives_x_times_root_of_y() {
        let f = Field::prime(5).unwrap();
        let g = g_form(&SkewPoly::phi(&f, 1));
        assert_eq!(g.monomials().len(), 1);
        let m = &g.monomials()[0];
        assert!(m.coeff.is_one());
        assert_eq!((m.x_exp, m.y_exp), (0, -1));
        for a in 0..5 {
            for b in 0..5 {
                let v = g.eval(&f.from_int(a), &f.from_int(b)).unwrap();
                assert_eq!(v, f.from_int(a * b));
            }
        }
    }

    #[test]
    fn defining_equation_for_single_monomials() {
        let f9 = Field::standard(3, 2).unwrap();
        let big = Field::standard(3, 6).unwrap();
        let x = big.element(&[1, 0, 2, 1, 0, 1]);
        let y = big.element(&[0, 2, 1, 0, 1]);
        for n in -3..=3 {
            let f = SkewPoly::monomial(f9.element(&[2, 1]), n);
            assert!(defining_residual(&f, &x, &y).is_zero(), "n = {n}");
        }
    }

    #[test]
    fn vanishes_on_axes() {
        let f = Field::standard(2, 3).unwrap();
        let poly = SkewPoly::from_terms(&f, [(-2, f.generator()), (1, f.one()), (3, f.element(&[1, 1]))]);
        let g = g_form(&poly);
        let x = f.element(&[1, 1, 1]);
        assert!(g.eval(&x, &f.zero()).unwrap().is_zero());
        assert!(g.eval(&f.zero(), &x).unwrap().is_zero());
    }

    #[test]
    fn matrix_base_case_and_diagonal_additivity() {
        let f = Field::prime(3).unwrap();
        let big = Field::standard(3, 4).unwrap();
        let f1 = SkewPoly::from_ints(&f, -1, &[1, 0, 2]);
        let f2 = SkewPoly::from_ints(&f, 0, &[1, 1, 1]);
        let x1 = big.element(&[1, 2, 0, 1]);
        let y1 = big.element(&[2, 1, 1]);
        let y2 = big.element(&[0, 0, 1, 2]);
        let single = SkewMatrix::single(f1.clone());
        assert_eq!(
            g_eval_matrix(&single, std::slice::from_ref(&x1), std::slice::from_ref(&y1)).unwrap(),
            g_form(&f1).eval(&x1, &y1).unwrap()
        );
        let diag = SkewMatrix::diagonal(&f, vec![f1.clone(), f2]);
        assert_eq!(
            g_eval_matrix(&diag, &[x1.clone(), big.zero()], &[y1.clone(), y2]).unwrap(),
            g_form(&f1).eval(&x1, &y1).unwrap()
        );
    }
}
