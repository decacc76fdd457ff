use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{isqrt, Discriminant, QuadraticForm};
use crate::error::{Error, Result};
use crate::modgroup::ModularWord;

fn check_indefinite(f: &QuadraticForm) -> Result<i64> {
    let d = f.disc();
    if d <= 0 || isqrt(d as u64).pow(2) == d as u64 {
        return Err(Error::Domain(format!("{f} is not indefinite with non-square discriminant")));
    }
    Ok(d)
}

/// |sqrt D - 2|a|| < b < sqrt D.
pub fn is_reduced_indefinite(f: &QuadraticForm) -> bool {
    let d = f.disc();
    if d <= 0 {
        return false;
    }
    let s = isqrt(d as u64) as i64;
    let a2 = 2 * f.a.abs();
    f.b > 0 && f.b <= s && f.b + a2 > s && a2 - f.b <= s
}

/// One reduction step (a, b, c) -> (c, r, (r^2 - D) / 4c) and its word.
fn step(f: &QuadraticForm, s: i64) -> (QuadraticForm, ModularWord) {
    let d = f.disc();
    let c = f.c;
    let ac = c.abs();
    let m = 2 * ac;
    // r = -b (mod 2|c|), placed in the window of length 2|c|
    let low = if ac > s { -ac + 1 } else { s + 1 - 2 * ac };
    let r = low + (-f.b - low).rem_euclid(m);
    let t = (r + f.b) / (2 * c);
    let next = QuadraticForm { a: c, b: r, c: (r * r - d) / (4 * c) };
    (next, ModularWord { p: 0, q: -1, r: 1, s: t })
}

/// Reduces an indefinite form; returns the reduced form and the word W with
/// f.transform(W) equal to it.
pub fn reduce_indefinite(f: &QuadraticForm) -> Result<(QuadraticForm, ModularWord)> {
    let d = check_indefinite(f)?;
    let s = isqrt(d as u64) as i64;
    let mut g = *f;
    let mut word = ModularWord::IDENTITY;
    for _ in 0..10_000 {
        if is_reduced_indefinite(&g) {
            return Ok((g, word));
        }
        let (next, w) = step(&g, s);
        g = next;
        word = word.mul(&w);
    }
    Err(Error::Convergence(format!("reduction of {f} did not terminate")))
}

/// All primitive reduced forms of a positive discriminant.
pub fn enumerate_reduced_indefinite(d: Discriminant) -> Result<Vec<QuadraticForm>> {
    if d.is_negative() {
        return Err(Error::Domain(format!("{d} is negative")));
    }
    let dv = d.value();
    let s = isqrt(dv as u64) as i64;
    let mut forms = HashSet::new();
    let mut b = if dv % 2 == 0 { 2 } else { 1 };
    while b <= s {
        let n = (dv - b * b) / 4;
        let mut k = 1;
        while k * k <= n {
            if n % k == 0 {
                for a_abs in [k, n / k] {
                    for a in [a_abs, -a_abs] {
                        let f = QuadraticForm { a, b, c: -n / a };
                        if is_reduced_indefinite(&f) && f.is_primitive() {
                            forms.insert(f);
                        }
                    }
                }
            }
            k += 1;
        }
        b += 2;
    }
    let mut forms: Vec<_> = forms.into_iter().collect();
    forms.sort();
    Ok(forms)
}

/// Reduced forms partitioned into reduction cycles (narrow classes); the
/// cycle of the principal form comes first, the others are ordered by their
/// smallest member. Each cycle starts at its smallest member.
pub fn narrow_cycles(d: Discriminant) -> Result<Vec<Vec<QuadraticForm>>> {
    let forms = enumerate_reduced_indefinite(d)?;
    let s = isqrt(d.value() as u64) as i64;
    let mut seen: HashMap<QuadraticForm, usize> = HashMap::new();
    let mut cycles: Vec<Vec<QuadraticForm>> = Vec::new();
    for f in &forms {
        if seen.contains_key(f) {
            continue;
        }
        let mut cycle = vec![*f];
        let mut g = step(f, s).0;
        while g != *f {
            cycle.push(g);
            g = step(&g, s).0;
        }
        let min_pos = cycle.iter().enumerate().min_by_key(|(_, g)| **g).map(|(i, _)| i).unwrap_or(0);
        cycle.rotate_left(min_pos);
        for g in &cycle {
            seen.insert(*g, cycles.len());
        }
        cycles.push(cycle);
    }
    let principal = reduce_indefinite(&d.principal_form())?.0;
    let p = seen[&principal];
    let first = cycles.remove(p);
    cycles.sort_by_key(|c| c[0]);
    cycles.insert(0, first);
    Ok(cycles)
}

/// Fundamental unit data of a real quadratic field.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitData {
    /// log of the fundamental unit (> 1).
    pub unit_log: f64,
    /// Norm of the fundamental unit, +1 or -1.
    pub norm: i32,
    /// Minimal t, u >= 1 with t^2 - D u^2 = 4.
    pub pell_t: BigInt,
    pub pell_u: BigInt,
}

impl UnitData {
    /// log of the smallest totally positive unit (t + u sqrt D)/2.
    pub fn positive_unit_log(&self) -> f64 {
        if self.norm == 1 {
            self.unit_log
        } else {
            2.0 * self.unit_log
        }
    }
}

/// Fundamental unit from the continued fraction of (D mod 2 + sqrt D) / 2.
pub fn fundamental_unit(d: Discriminant) -> Result<UnitData> {
    if d.is_negative() {
        return Err(Error::Domain(format!("{d} is negative")));
    }
    let dv = d.value();
    let root = (dv as f64).sqrt();
    let s = isqrt(dv as u64) as i64;
    let (mut p, mut q) = (dv % 2, 2i64);
    // advance to the first complete quotient, which is purely periodic
    let a0 = Integer::div_floor(&(p + s), &q);
    let p1 = a0 * q - p;
    q = (dv - p1 * p1) / q;
    p = p1;
    let start = (p, q);
    let mut log = 0.0;
    let mut length = 0u32;
    let (mut x, mut y, mut den) = (BigInt::one(), BigInt::zero(), BigInt::one());
    let big_d = BigInt::from(dv);
    loop {
        // multiply by (p + sqrt D) / q
        log += ((p as f64 + root) / q as f64).ln();
        let bp = BigInt::from(p);
        let nx = &x * &bp + &y * &big_d;
        let ny = &x + &y * &bp;
        den *= q;
        let g = nx.gcd(&ny).gcd(&den);
        x = nx / &g;
        y = ny / &g;
        den /= &g;
        length += 1;
        let a = Integer::div_floor(&(p + s), &q);
        let pn = a * q - p;
        q = (dv - pn * pn) / q;
        p = pn;
        if (p, q) == start {
            break;
        }
        if length > 10_000_000 {
            return Err(Error::Convergence(format!("continued fraction period of {d} too long")));
        }
    }
    let two = BigInt::from(2);
    let (mut t, mut u) = ((&x * &two) / &den, (&y * &two) / &den);
    if &t * &den != &x * &two || &u * &den != &y * &two {
        return Err(Error::Convergence(format!("unit of {d} is not integral")));
    }
    let norm = if length % 2 == 0 { 1 } else { -1 };
    if norm == -1 {
        let (t2, u2) = ((&t * &t + &big_d * &u * &u) / &two, &t * &u);
        t = t2;
        u = u2;
    }
    debug_assert!(&t * &t - &big_d * &u * &u == BigInt::from(4));
    Ok(UnitData { unit_log: log, norm, pell_t: t, pell_u: u })
}

/// Closed geodesic of an indefinite form: the semicircle through the roots
/// (-b +- sqrt D) / 2a, closed up by the automorph.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicCycle {
    pub form: QuadraticForm,
    pub center: f64,
    pub radius: f64,
    /// Generator of the automorphs; `None` when its entries exceed 64 bits.
    pub automorph: Option<ModularWord>,
    /// Hyperbolic length of one automorph period, 2 log((t + u sqrt D)/2).
    pub period_length: f64,
}

impl GeodesicCycle {
    /// Point at signed hyperbolic arc length `s` from the top of the semicircle.
    pub fn point(&self, s: f64) -> (f64, f64) {
        (self.center - self.radius * s.tanh(), self.radius / s.cosh())
    }
}

/// Geodesic data of a form of positive discriminant.
pub fn geodesic_cycle(f: &QuadraticForm) -> Result<GeodesicCycle> {
    let d = check_indefinite(f)?;
    if f.a == 0 {
        return Err(Error::Domain(format!("{f} has a = 0")));
    }
    let disc = Discriminant::new(d)?;
    let unit = fundamental_unit(disc)?;
    let automorph = automorph_word(f, &unit.pell_t, &unit.pell_u);
    Ok(GeodesicCycle {
        form: *f,
        center: -(f.b as f64) / (2.0 * f.a as f64),
        radius: (d as f64).sqrt() / (2.0 * f.a.abs() as f64),
        automorph,
        period_length: 2.0 * unit.positive_unit_log(),
    })
}

/// ((t - b u)/2, -c u; a u, (t + b u)/2).
fn automorph_word(f: &QuadraticForm, t: &BigInt, u: &BigInt) -> Option<ModularWord> {
    let (a, b, c) = (BigInt::from(f.a), BigInt::from(f.b), BigInt::from(f.c));
    let two = BigInt::from(2);
    let p = (t - &b * u) / &two;
    let q = -(&c * u);
    let r = &a * u;
    let s = (t + &b * u) / &two;
    let fits = |x: &BigInt| x.abs() < BigInt::from(i64::MAX / 4);
    if ![&p, &q, &r, &s].iter().all(|x| fits(x)) {
        return None;
    }
    Some(ModularWord { p: p.to_i64()?, q: q.to_i64()?, r: r.to_i64()?, s: s.to_i64()? })
}
