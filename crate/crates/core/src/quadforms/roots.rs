use std::collections::HashMap;

use super::{kronecker_chi, Discriminant};

/// x^2 = D (mod p) for an odd prime p not dividing D with (D/p) = 1.
fn sqrt_mod_prime(d: i64, p: u64) -> u64 {
    let a = d.rem_euclid(p as i64) as u64;
    let mulmod = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    if p % 4 == 3 {
        return powmod(a, p.div_ceil(4));
    }
    // Tonelli-Shanks
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2u64;
    while powmod(z, (p - 1) / 2) != p - 1 {
        z += 1;
    }
    let (mut m, mut c, mut t, mut r) = (s, powmod(z, q), powmod(a, q), powmod(a, q.div_ceil(2)));
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulmod(tt, tt);
            i += 1;
        }
        let b = powmod(c, 1 << (m - i - 1));
        m = i;
        c = mulmod(b, b);
        t = mulmod(t, c);
        r = mulmod(r, b);
    }
    r
}

struct RootTables {
    d: i64,
    two: HashMap<u32, Vec<u64>>,
    odd: HashMap<(u64, u32), Vec<u64>>,
}

impl RootTables {
    /// b mod 2^{e+1} with b^2 = D (mod 2^{e+2}).
    fn two_part(&mut self, e: u32) -> &Vec<u64> {
        let d = self.d;
        self.two.entry(e).or_insert_with(|| {
            let m = 1u64 << (e + 1);
            let big = 1i128 << (e + 2);
            let target = (d as i128).rem_euclid(big);
            (0..m).filter(|&b| (b as i128 * b as i128) % big == target).collect()
        })
    }

    /// x mod p^k with x^2 = D (mod p^k), p odd.
    fn odd_part(&mut self, p: u64, k: u32) -> &Vec<u64> {
        let d = self.d;
        self.odd.entry((p, k)).or_insert_with(|| {
            let pk = p.pow(k);
            if d.rem_euclid(p as i64) == 0 {
                let target = (d as i128).rem_euclid(pk as i128);
                return (0..pk).filter(|&x| (x as i128 * x as i128) % pk as i128 == target).collect();
            }
            if kronecker_chi(d, p as i64) != 1 {
                return vec![];
            }
            let mut r = sqrt_mod_prime(d, p) as i128;
            let mut modulus = p as i128;
            for _ in 1..k {
                modulus *= p as i128;
                // Hensel: r <- r - (r^2 - D) / (2r) mod p^{j+1}
                let f = (r * r - d as i128).rem_euclid(modulus);
                let inv = mod_inverse((2 * r).rem_euclid(modulus), modulus);
                r = (r - f * inv).rem_euclid(modulus);
            }
            let mut v = vec![r as u64, (modulus - r) as u64 % pk];
            v.sort();
            v.dedup();
            v
        })
    }
}

fn mod_inverse(a: i128, m: i128) -> i128 {
    let (mut old_r, mut r) = (a, m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(m)
}

/// Calls `visit(n, b)` for every n in 1..=n_max and every b in (-n, n] with
/// b^2 = D (mod 4n); these (n, b) are exactly the primitive ideals of norm n,
/// i.e. the forms (n, b, (b^2 - D)/4n). The visiting order is n ascending,
/// then b ascending.
pub fn for_each_ideal_form<F: FnMut(u64, i64)>(d: Discriminant, n_max: u64, mut visit: F) {
    let n_max = n_max.max(1);
    let mut spf = vec![0u32; n_max as usize + 1];
    for i in 2..=n_max as usize {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n_max as usize {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    let mut tables = RootTables { d: d.value(), two: HashMap::new(), odd: HashMap::new() };
    let mut residues: Vec<u64> = Vec::new();
    let mut next: Vec<u64> = Vec::new();
    for n in 1..=n_max {
        let mut m = n;
        let e = m.trailing_zeros();
        m >>= e;
        residues.clear();
        residues.extend_from_slice(tables.two_part(e));
        let mut modulus = 1u64 << (e + 1);
        while m > 1 && !residues.is_empty() {
            let p = spf[m as usize] as u64;
            let mut k = 0;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            let pk = p.pow(k);
            let roots = tables.odd_part(p, k);
            // CRT: x = r (mod modulus), x = s (mod pk)
            let inv = mod_inverse(modulus as i128 % pk as i128, pk as i128);
            next.clear();
            for &r in residues.iter() {
                for &s in roots {
                    let t = ((s as i128 - r as i128) * inv).rem_euclid(pk as i128);
                    next.push((r as i128 + modulus as i128 * t) as u64);
                }
            }
            std::mem::swap(&mut residues, &mut next);
            modulus *= pk;
        }
        if residues.is_empty() {
            continue;
        }
        let mut bs: Vec<i64> = residues.iter().map(|&b| if b as i64 > n as i64 { b as i64 - 2 * n as i64 } else { b as i64 }).collect();
        bs.sort();
        for b in bs {
            visit(n, b);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadforms::rho;

    #[test]
    fn matches_direct_count() {
        for dv in [-23i64, -4, -3, -84, 5, 8, 12, 21, 229, -15] {
            let d = Discriminant::fundamental(dv).unwrap();
            let mut counts = vec![0u64; 301];
            for_each_ideal_form(d, 300, |n, b| {
                assert!((b * b - dv) % (4 * n as i64) == 0);
                assert!(-(n as i64) < b && b <= n as i64);
                counts[n as usize] += 1;
            });
            for n in 1..=300u64 {
                assert_eq!(counts[n as usize], rho(dv, n), "D={dv} n={n}");
            }
        }
    }
}
