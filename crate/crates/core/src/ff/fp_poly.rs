//! Dense univariate polynomials over a prime field, stored constant term first.
//!
//! These helpers back field construction (irreducibility tests, modulus search)
//! and never leave the crate.

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p), "inverse of zero mod {p}");
    let (mut r0, mut r1) = (p as i64, (a % p) as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(p as i64) as u32
}

pub(crate) fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub(crate) fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let len = a.len().max(b.len());
    let mut out: Vec<u32> = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            acc[i + j] += (x as u64) * (y as u64);
        }
    }
    let mut out: Vec<u32> = acc.into_iter().map(|c| (c % p as u64) as u32).collect();
    trim(&mut out);
    out
}

/// Remainder of `a` modulo a nonzero `m`.
pub(crate) fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    divrem(a, m, p).1
}

pub(crate) fn divrem(a: &[u32], m: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    let dm = degree(m).expect("division by zero polynomial");
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() <= dm {
        return (Vec::new(), r);
    }
    let lead_inv = inv_mod(m[dm], p);
    let mut q = vec![0u32; r.len() - dm];
    for top in (dm..r.len()).rev() {
        let c = r[top];
        if c == 0 {
            continue;
        }
        let factor = (c as u64 * lead_inv as u64 % p as u64) as u32;
        q[top - dm] = factor;
        for (k, &mk) in m[..=dm].iter().enumerate() {
            let idx = top - dm + k;
            let sub = (factor as u64 * mk as u64 % p as u64) as u32;
            r[idx] = (r[idx] + p - sub) % p;
        }
    }
    trim(&mut q);
    trim(&mut r);
    (q, r)
}

pub(crate) fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn powmod(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut result = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(&result, &b, m, p);
        }
        e >>= 1;
        if e > 0 {
            b = mulmod(&b, &b, m, p);
        }
    }
    result
}

/// Monic gcd.
pub(crate) fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(d) = degree(&x) {
        let inv = inv_mod(x[d], p);
        for c in x.iter_mut() {
            *c = (*c as u64 * inv as u64 % p as u64) as u32;
        }
    }
    x
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test, with an early exit on small-degree factors.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = match degree(f) {
        Some(0) | None => return false,
        Some(n) => n,
    };
    if n == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let x = vec![0, 1];
    let mut xp = x.clone();
    let maximal: Vec<usize> = prime_factors(n).into_iter().map(|q| n / q).collect();
    for i in 1..=n {
        xp = powmod(&xp, p as u64, f, p);
        if (i <= n / 2 || maximal.contains(&i))
            && i < n && degree(&gcd(&sub(&xp, &x, p), f, p)).unwrap_or(0) > 0 {
                return false;
            }
    }
    sub(&xp, &x, p).is_empty()
}

/// Nonzero coefficients of `t^n - m(t)` for a monic `m` of degree `n`, stored
/// as `(k, p - m_k)`: the rule rewriting `t^n` in lower powers.
pub(crate) fn reduction_tail(m: &[u32], p: u32) -> Vec<(usize, u64)> {
    let n = m.len() - 1;
    m[..n].iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, &c)| (k, (p - c) as u64)).collect()
}

/// Reduces `acc` modulo the monic polynomial of degree `n` with the given
/// tail. Only `acc[..n]` is meaningful afterwards, and it is not yet reduced
/// mod `p`.
pub(crate) fn reduce_with_tail(acc: &mut [u64], n: usize, tail: &[(usize, u64)], p: u64) {
    for top in (n..acc.len()).rev() {
        let v = acc[top] % p;
        acc[top] = 0;
        if v == 0 {
            continue;
        }
        for &(k, neg) in tail {
            acc[top - n + k] += neg * v;
        }
    }
}

/// `a^p` modulo the polynomial with the given tail, using
/// `(sum a_i t^i)^p = sum a_i t^(ip)` over `F_p`.
pub(crate) fn frobenius_with_tail(a: &[u32], n: usize, tail: &[(usize, u64)], p: u32) -> Vec<u32> {
    let pu = p as usize;
    let mut acc = vec![0u64; (n.max(1) - 1) * pu + 1];
    for (i, &x) in a.iter().enumerate() {
        acc[i * pu] = x as u64;
    }
    reduce_with_tail(&mut acc, n, tail, p as u64);
    let mut out: Vec<u32> = acc.iter().take(n).map(|&x| (x % p as u64) as u32).collect();
    out.resize(n, 0);
    out
}

/// Rabin's test for a modulus whose small factors were already excluded;
/// the `x^(p^i)` chain uses the sparse Frobenius.
fn is_irreducible_sparse(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    let tail = reduction_tail(f, p);
    let mut x = vec![0u32; n];
    x[1] = 1;
    let mut xp = x.clone();
    let maximal: Vec<usize> = prime_factors(n).into_iter().map(|q| n / q).collect();
    for i in 1..=n {
        xp = frobenius_with_tail(&xp, n, &tail, p);
        if i < n && maximal.contains(&i) && degree(&gcd(&sub(&xp, &x, p), f, p)).unwrap_or(0) > 0 {
            return false;
        }
    }
    xp == x
}

/// All monic irreducibles of degree `1..=d`.
fn small_irreducibles(p: u32, d: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for deg in 1..=d {
        let count = (p as usize).pow(deg as u32);
        for code in 0..count {
            let mut g: Vec<u32> = (0..deg).map(|i| (code / (p as usize).pow(i as u32) % p as usize) as u32).collect();
            g.push(1);
            if is_irreducible(&g, p) {
                out.push(g);
            }
        }
    }
    out
}

/// Degrees up to which the dense test is used directly.
const DENSE_SEARCH_MAX: usize = 32;

/// Smallest monic irreducible of degree `n`, ordering candidates by the base-`p`
/// integer whose least significant digit is the constant term.
///
/// Large degrees first discard candidates with a factor of small degree by
/// trial division, then run Rabin's test with the sparse Frobenius. The
/// candidates are visited in the same order, so the result is the same.
pub(crate) fn smallest_irreducible(p: u32, n: usize) -> Vec<u32> {
    let mut tail = vec![0u32; n];
    let small = if n > DENSE_SEARCH_MAX {
        let mut d = 1;
        while d + 1 < n && (p as u64).pow(d as u32 + 1) <= 2048 {
            d += 1;
        }
        small_irreducibles(p, d)
    } else {
        Vec::new()
    };
    // t^n mod g for each trial divisor; n is fixed during the search
    let leading: Vec<Vec<u32>> = small.iter().map(|g| powmod(&[0, 1], n as u64, g, p)).collect();
    loop {
        let mut f = tail.clone();
        f.push(1);
        let found = if n <= DENSE_SEARCH_MAX {
            is_irreducible(&f, p)
        } else if f[0] == 0 {
            false
        } else {
            let mut low = tail.clone();
            trim(&mut low);
            let has_small_factor = small.iter().zip(&leading).any(|(g, lead)| {
                let r = rem(&low, g, p);
                sub(&r, &sub(&[], lead, p), p).is_empty()
            });
            !has_small_factor && is_irreducible_sparse(&f, p)
        };
        if found {
            return f;
        }
        // increment the base-p counter
        let mut i = 0;
        loop {
            tail[i] += 1;
            if tail[i] < p {
                break;
            }
            tail[i] = 0;
            i += 1;
            assert!(i < n, "no irreducible polynomial of degree {n} over F_{p}");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility_small_cases() {
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(!is_irreducible(&[1, 0, 1], 2));
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[0, 0, 1], 5));
        // x^4 + x + 1 over F_2
        assert!(is_irreducible(&[1, 1, 0, 0, 1], 2));
        // (x^2+x+1)^2 = x^4 + x^2 + 1
        assert!(!is_irreducible(&[1, 0, 1, 0, 1], 2));
    }

    #[test]
    fn smallest_irreducibles() {
        assert_eq!(smallest_irreducible(3, 1), vec![0, 1]);
        assert_eq!(smallest_irreducible(3, 2), vec![1, 0, 1]);
        assert_eq!(smallest_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(smallest_irreducible(2, 3), vec![1, 1, 0, 1]);
    }

    #[test]
    fn irreducible_count_matches_necklace_formula() {
        // number of monic irreducibles of degree 4 over F_3 is (81 - 9)/4 = 18
        let mut count = 0;
        for code in 0..81u32 {
            let mut f: Vec<u32> = (0..4).map(|i| (code / 3u32.pow(i)) % 3).collect();
            f.push(1);
            if is_irreducible(&f, 3) {
                count += 1;
            }
        }
        assert_eq!(count, 18);
    }

    #[test]
    fn sparse_search_agrees_with_dense_test() {
        for (p, n) in [(2, 40), (3, 33), (5, 34)] {
            let f = smallest_irreducible(p, n);
            assert!(is_irreducible(&f, p));
            // every smaller candidate is reducible
            let mut tail = f[..n].to_vec();
            let mut checked = 0;
            while tail.iter().any(|&c| c != 0) && checked < 200 {
                let mut i = 0;
                loop {
                    if tail[i] > 0 {
                        tail[i] -= 1;
                        break;
                    }
                    tail[i] = p - 1;
                    i += 1;
                }
                let mut g = tail.clone();
                g.push(1);
                assert!(!is_irreducible(&g, p), "{g:?}");
                checked += 1;
            }
        }
    }

    #[test]
    fn sparse_frobenius_matches_powering() {
        let p = 3;
        let m = smallest_irreducible(p, 7);
        let tail = reduction_tail(&m, p);
        let a = vec![2, 0, 1, 1, 0, 2, 1];
        let direct = powmod(&a, p as u64, &m, p);
        let mut direct_full = direct.clone();
        direct_full.resize(7, 0);
        assert_eq!(frobenius_with_tail(&a, 7, &tail, p), direct_full);
    }

    #[test]
    fn inverse_mod_prime() {
        for a in 1..97 {
            assert_eq!(a * inv_mod(a, 97) % 97, 1);
        }
    }
}
