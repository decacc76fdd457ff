use num_integer::Integer;

use super::{isqrt, Discriminant, QuadraticForm};
use crate::error::{Error, Result};
use crate::modgroup::ModularWord;

const SWAP: ModularWord = ModularWord { p: 0, q: -1, r: 1, s: 0 };

/// Reduces a positive definite form to -a < b <= a <= c (b >= 0 when a = c).
/// Returns the reduced form and the word W with f.transform(W) equal to it.
pub fn reduce_definite(f: &QuadraticForm) -> Result<(QuadraticForm, ModularWord)> {
    let d = f.disc();
    if d >= 0 || f.a <= 0 {
        return Err(Error::Domain(format!("{f} is not positive definite")));
    }
    let QuadraticForm { mut a, mut b, mut c } = *f;
    let mut word = ModularWord::IDENTITY;
    loop {
        // bring b into (-a, a]
        if b <= -a || b > a {
            let n = Integer::div_floor(&(a - b), &(2 * a));
            let (nb, nc) = (b + 2 * a * n, a * n * n + b * n + c);
            b = nb;
            c = nc;
            word = word.mul(&ModularWord::translation(n));
        }
        if a > c {
            (a, b, c) = (c, -b, a);
            word = word.mul(&SWAP);
            continue;
        }
        if a == c && b < 0 {
            (a, b, c) = (c, -b, a);
            word = word.mul(&SWAP);
        }
        break;
    }
    Ok((QuadraticForm { a, b, c }, word))
}

/// All reduced forms of a negative fundamental discriminant, sorted.
pub fn enumerate_reduced(d: Discriminant) -> Result<Vec<QuadraticForm>> {
    if !d.is_negative() || !d.is_fundamental() {
        return Err(Error::Domain(format!("{d} is not a negative fundamental discriminant")));
    }
    let dv = d.value();
    let a_max = isqrt(d.abs() / 3);
    let mut forms = Vec::new();
    for a in 1..=a_max as i64 {
        for b in (-a + 1)..=a {
            let num = b * b - dv;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            let f = QuadraticForm { a, b, c };
            if f.is_primitive() {
                forms.push(f);
            }
        }
    }
    forms.sort();
    Ok(forms)
}

/// Dirichlet composition of two primitive forms of equal discriminant,
/// without reduction.
pub(crate) fn compose_raw(f: &QuadraticForm, g: &QuadraticForm) -> QuadraticForm {
    let d = f.disc() as i128;
    let (a1, b1) = (f.a as i128, f.b as i128);
    let (a2, b2, c2) = (g.a as i128, g.b as i128, g.c as i128);
    let beta = (b1 + b2) / 2;
    let e1 = a1.extended_gcd(&a2);
    let e2 = e1.gcd.extended_gcd(&beta);
    let e = e2.gcd;
    // u a1 + v a2 + w beta = e
    let v = e2.x * e1.y;
    let w = e2.y;
    let a3 = a1 * a2 / (e * e);
    let mut b3 = b2 + 2 * (a2 / e) * (v * (beta - b2) - w * c2);
    b3 = b3.rem_euclid(2 * a3.abs());
    if b3 > a3.abs() {
        b3 -= 2 * a3.abs();
    }
    let c3 = (b3 * b3 - d) / (4 * a3);
    QuadraticForm { a: a3 as i64, b: b3 as i64, c: c3 as i64 }
}

/// Reduced composite of two positive definite forms.
pub fn compose(f: &QuadraticForm, g: &QuadraticForm) -> Result<QuadraticForm> {
    if f.disc() != g.disc() {
        return Err(Error::Domain(format!("discriminants of {f} and {g} differ")));
    }
    if f.disc() >= 0 {
        return Err(Error::Domain(format!("{f} is not definite; use the class group for D > 0")));
    }
    Ok(reduce_definite(&compose_raw(f, g))?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64, c: i64) -> QuadraticForm {
        QuadraticForm::new(a, b, c)
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(reduce_definite(&q(1, 0, 1)).unwrap().0, q(1, 0, 1));
        assert_eq!(reduce_definite(&q(1, 1, 6)).unwrap().0, q(1, 1, 6));
        let (r, w) = reduce_definite(&q(6, 5, 2)).unwrap();
        assert_eq!(r, q(2, -1, 3));
        assert_eq!(q(6, 5, 2).transform(&w), r);
        assert_eq!(w.det(), 1);
        assert!(reduce_definite(&q(1, 3, 1)).is_err());
    }

    #[test]
    fn enumeration_examples() {
        let f = |d| enumerate_reduced(Discriminant::fundamental(d).unwrap()).unwrap();
        assert_eq!(f(-4), vec![q(1, 0, 1)]);
        assert_eq!(f(-3), vec![q(1, 1, 1)]);
        assert_eq!(f(-23), vec![q(1, 1, 6), q(2, -1, 3), q(2, 1, 3)]);
        assert_eq!(f(-15), vec![q(1, 1, 4), q(2, 1, 2)]);
    }

    #[test]
    fn composition_examples() {
        assert_eq!(compose(&q(1, 1, 6), &q(2, 1, 3)).unwrap(), q(2, 1, 3));
        assert_eq!(compose(&q(2, 1, 3), &q(2, -1, 3)).unwrap(), q(1, 1, 6));
        assert_eq!(compose(&q(2, 1, 3), &q(2, 1, 3)).unwrap(), q(2, -1, 3));
        assert!(compose(&q(2, 1, 3), &q(1, 0, 1)).is_err());
    }
}
