use std::collections::HashMap;

use num_complex::Complex64;
use num_integer::Integer;

use super::definite::{compose_raw, enumerate_reduced, reduce_definite};
use super::indefinite::{fundamental_unit, narrow_cycles, reduce_indefinite};
use super::{Discriminant, QuadraticForm};
use crate::error::{Error, Result};

/// Largest |D| for which class groups are built.
pub const MAX_ABS_DISCRIMINANT: u64 = 10_000_000;

/// Class group of a fundamental discriminant with its character table.
///
/// For D < 0 classes are represented by reduced forms. For D > 0 they are
/// wide classes: the narrow classes of Q and of Q composed with the class of
/// (-1, D mod 2, (D - D mod 2)/4) are merged, which identifies ideals that
/// differ by a principal ideal with a generator of negative norm.
#[derive(Debug, Clone)]
pub struct ClassGroupData {
    pub disc: Discriminant,
    /// One representative per class, principal class first.
    pub reduced_forms: Vec<QuadraticForm>,
    pub h: usize,
    /// composition_table[i][j] is the index of class i * class j.
    pub composition_table: Vec<Vec<usize>>,
    /// Generators (class index, order) of a decomposition into cyclic factors.
    pub cyclic_decomposition: Vec<(usize, usize)>,
    /// characters[k][i] = value of the k-th character on class i.
    pub characters: Vec<Vec<Complex64>>,
    /// Exact phases: characters[k][i] = exp(2 pi i phases[k][i] / exponent).
    pub phases: Vec<Vec<u64>>,
    /// Group exponent (lcm of the cyclic orders).
    pub exponent: u64,
    /// Number of roots of unity (D < 0 only).
    pub omega: Option<u32>,
    /// log of the fundamental unit (D > 0 only).
    pub unit_log: Option<f64>,
    /// Reduced form -> class index, covering every reduced form for D > 0.
    lookup: HashMap<QuadraticForm, usize>,
}

impl ClassGroupData {
    /// Class index of any primitive form of this discriminant.
    pub fn class_of(&self, f: &QuadraticForm) -> Result<usize> {
        if f.disc() != self.disc.value() {
            return Err(Error::Domain(format!("{f} does not have discriminant {}", self.disc)));
        }
        let reduced = if self.disc.is_negative() { reduce_definite(f)?.0 } else { reduce_indefinite(f)?.0 };
        self.lookup
            .get(&reduced)
            .copied()
            .ok_or_else(|| Error::Domain(format!("{f} reduces to {reduced}, which is not a primitive class")))
    }

    /// Index of the inverse class.
    pub fn inverse(&self, i: usize) -> usize {
        self.composition_table[i].iter().position(|&k| k == 0).expect("group table has inverses")
    }

    /// Index of the complex-conjugate character.
    pub fn conj_character(&self, k: usize) -> usize {
        let target: Vec<u64> = self.phases[k].iter().map(|&p| (self.exponent - p) % self.exponent).collect();
        self.phases.iter().position(|row| *row == target).expect("conjugate character exists")
    }

    /// Indices of the real-valued characters.
    pub fn real_characters(&self) -> Vec<usize> {
        (0..self.h).filter(|&k| self.phases[k].iter().all(|&p| (2 * p) % self.exponent == 0)).collect()
    }

    /// Rebuilds the data from a stored form list and composition table.
    pub(crate) fn from_parts(
        disc: Discriminant,
        reduced_forms: Vec<QuadraticForm>,
        composition_table: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let lookup = build_lookup(disc, &reduced_forms)?;
        assemble(disc, reduced_forms, composition_table, lookup)
    }
}

fn check_disc(d: Discriminant) -> Result<()> {
    if !d.is_fundamental() {
        return Err(Error::Domain(format!("{d} is not fundamental")));
    }
    if d.abs() > MAX_ABS_DISCRIMINANT {
        return Err(Error::Resource(format!("|D| = {} exceeds the cap {MAX_ABS_DISCRIMINANT}", d.abs())));
    }
    Ok(())
}

/// Wide classes for D > 0: each entry lists the narrow cycles it merges.
fn wide_classes(d: Discriminant) -> Result<(Vec<QuadraticForm>, HashMap<QuadraticForm, usize>)> {
    let cycles = narrow_cycles(d)?;
    let mut narrow_of = HashMap::new();
    for (i, c) in cycles.iter().enumerate() {
        for f in c {
            narrow_of.insert(*f, i);
        }
    }
    let p = d.principal_form();
    let twist = QuadraticForm::new(-1, p.b, -p.c);
    let twist_class = narrow_of[&reduce_indefinite(&twist)?.0];
    let mut wide_of = vec![usize::MAX; cycles.len()];
    let mut reps = Vec::new();
    for i in 0..cycles.len() {
        if wide_of[i] != usize::MAX {
            continue;
        }
        let partner = if twist_class == 0 {
            i
        } else {
            narrow_of[&reduce_indefinite(&compose_raw(&cycles[i][0], &cycles[twist_class][0]))?.0]
        };
        wide_of[i] = reps.len();
        wide_of[partner] = reps.len();
        reps.push(cycles[i][0]);
    }
    let lookup = narrow_of.into_iter().map(|(f, i)| (f, wide_of[i])).collect();
    Ok((reps, lookup))
}

fn build_lookup(d: Discriminant, forms: &[QuadraticForm]) -> Result<HashMap<QuadraticForm, usize>> {
    if d.is_negative() {
        Ok(forms.iter().enumerate().map(|(i, f)| (*f, i)).collect())
    } else {
        let (reps, lookup) = wide_classes(d)?;
        if reps != forms {
            return Err(Error::Parse(format!("stored class representatives for {d} do not match")));
        }
        Ok(lookup)
    }
}

/// Builds the class group of a fundamental discriminant.
pub fn class_group(d: Discriminant) -> Result<ClassGroupData> {
    check_disc(d)?;
    let (forms, lookup) = if d.is_negative() {
        let mut forms = enumerate_reduced(d)?;
        let principal = d.principal_form();
        let pos = forms.iter().position(|f| *f == principal).expect("principal form is reduced");
        let p = forms.remove(pos);
        forms.insert(0, p);
        let lookup = forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        (forms, lookup)
    } else {
        wide_classes(d)?
    };
    let h = forms.len();
    let mut table = vec![vec![0usize; h]; h];
    for i in 0..h {
        for j in i..h {
            let g = compose_raw(&forms[i], &forms[j]);
            let r = if d.is_negative() { reduce_definite(&g)?.0 } else { reduce_indefinite(&g)?.0 };
            let k = *lookup
                .get(&r)
                .ok_or_else(|| Error::Convergence(format!("composite {r} of {} and {} not classified", forms[i], forms[j])))?;
            table[i][j] = k;
            table[j][i] = k;
        }
    }
    assemble(d, forms, table, lookup)
}

fn assemble(
    disc: Discriminant,
    reduced_forms: Vec<QuadraticForm>,
    composition_table: Vec<Vec<usize>>,
    lookup: HashMap<QuadraticForm, usize>,
) -> Result<ClassGroupData> {
    let h = reduced_forms.len();
    if composition_table.len() != h || composition_table.iter().any(|r| r.len() != h || r.iter().any(|&k| k >= h)) {
        return Err(Error::Parse(format!("composition table for {disc} has the wrong shape")));
    }
    let (decomposition, coords) = decompose(&composition_table)?;
    let exponent = decomposition.iter().fold(1u64, |acc, &(_, n)| acc.lcm(&(n as u64)));
    // character with exponent vector e: phase(x) = sum e_i v_i(x) exponent / n_i
    let mut exps: Vec<Vec<usize>> = vec![vec![]];
    for &(_, n) in &decomposition {
        exps = exps.into_iter().flat_map(|e| (0..n).map(move |k| [e.clone(), vec![k]].concat())).collect();
    }
    let mut phases: Vec<Vec<u64>> = exps
        .iter()
        .map(|e| {
            (0..h)
                .map(|x| {
                    let mut p = 0u64;
                    for (i, &(_, n)) in decomposition.iter().enumerate() {
                        p += (e[i] * coords[x][i]) as u64 * (exponent / n as u64);
                    }
                    p % exponent
                })
                .collect()
        })
        .collect();
    phases.sort();
    let characters = phases.iter().map(|row| row.iter().map(|&p| root_of_unity(p, exponent)).collect()).collect();
    let omega = disc.omega();
    let unit_log = if disc.is_negative() { None } else { Some(fundamental_unit(disc)?.unit_log) };
    Ok(ClassGroupData {
        disc,
        reduced_forms,
        h,
        composition_table,
        cyclic_decomposition: decomposition,
        characters,
        phases,
        exponent,
        omega,
        unit_log,
        lookup,
    })
}

/// exp(2 pi i k / n), exact at multiples of a quarter turn.
fn root_of_unity(k: u64, n: u64) -> Complex64 {
    if (4 * k) % n == 0 {
        return match 4 * k / n {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64)
}

/// Cyclic decomposition by repeated extraction of an element of maximal
/// order modulo the subgroup found so far. Returns the generators with their
/// orders and, for every element, its exponent vector.
fn decompose(table: &[Vec<usize>]) -> Result<(Vec<(usize, usize)>, Vec<Vec<usize>>)> {
    let h = table.len();
    if table[0].iter().enumerate().any(|(i, &k)| k != i) {
        return Err(Error::Parse("class 0 is not the identity".into()));
    }
    let power = |g: usize, k: usize| (0..k).fold(0usize, |acc, _| table[acc][g]);
    let mut gens: Vec<(usize, usize)> = Vec::new();
    // coords[x] = Some(exponent vector) once x is in the subgroup
    let mut coords: Vec<Option<Vec<usize>>> = vec![None; h];
    coords[0] = Some(vec![]);
    let mut size = 1;
    while size < h {
        let mut best = (0usize, 0usize);
        for g in 0..h {
            if coords[g].is_some() {
                continue;
            }
            let (mut x, mut k) = (g, 1);
            while coords[x].is_none() {
                x = table[x][g];
                k += 1;
            }
            if k > best.1 {
                best = (g, k);
            }
        }
        let (g, n) = best;
        let landing = coords[power(g, n)].clone().expect("power lands in subgroup");
        let mut adjusted = g;
        for (i, &(gi, ni)) in gens.iter().enumerate() {
            let k = landing[i];
            if k % n != 0 {
                return Err(Error::Convergence("cyclic decomposition failed".into()));
            }
            let back = power(gi, (ni - k / n) % ni);
            adjusted = table[adjusted][back];
        }
        let members: Vec<(usize, Vec<usize>)> =
            (0..h).filter_map(|x| coords[x].clone().map(|v| (x, v))).collect();
        for (x, v) in members {
            let mut y = x;
            for j in 0..n {
                let mut w = v.clone();
                w.resize(gens.len(), 0);
                w.push(j);
                coords[y] = Some(w);
                y = table[y][adjusted];
            }
        }
        gens.push((adjusted, n));
        size *= n;
    }
    let coords = coords
        .into_iter()
        .map(|c| {
            let mut v = c.expect("every element reached");
            v.resize(gens.len(), 0);
            v
        })
        .collect();
    Ok((gens, coords))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(d: i64) -> ClassGroupData {
        class_group(Discriminant::fundamental(d).unwrap()).unwrap()
    }

    #[test]
    fn small_groups() {
        let g = group(-23);
        assert_eq!(g.h, 3);
        assert_eq!(g.cyclic_decomposition.len(), 1);
        assert_eq!(g.cyclic_decomposition[0].1, 3);
        for row in &g.characters {
            for v in row {
                assert!((v.powu(3) - 1.0).norm() < 1e-12);
            }
        }
        assert_eq!(g.omega, Some(2));
        let g = group(-15);
        assert_eq!(g.reduced_forms, vec![QuadraticForm::new(1, 1, 4), QuadraticForm::new(2, 1, 2)]);
        let g = group(5);
        assert_eq!(g.h, 1);
        assert!((g.unit_log.unwrap() - 0.481_211_825_059_603_4).abs() < 1e-12);
        assert_eq!(group(21).h, 1);
        assert_eq!(group(12).h, 1);
        assert_eq!(group(40).h, 2);
        assert_eq!(group(229).h, 3);
        assert_eq!(group(-84).cyclic_decomposition.iter().map(|g| g.1).collect::<Vec<_>>(), vec![2, 2]);
        assert_eq!(group(-4).omega, Some(4));
        assert_eq!(group(-3).omega, Some(6));
    }

    #[test]
    fn class_lookup() {
        let g = group(-23);
        assert_eq!(g.class_of(&QuadraticForm::new(6, 5, 2)).unwrap(), 1);
        assert_eq!(g.inverse(1), 2);
        let g = group(229);
        for f in &g.reduced_forms {
            assert_eq!(g.class_of(f).unwrap(), g.reduced_forms.iter().position(|x| x == f).unwrap());
        }
    }

    #[test]
    fn caps() {
        assert!(matches!(class_group(Discriminant::new(-16).unwrap()), Err(Error::Domain(_))));
        let big = (10_000_001..).map(|v: i64| -v).find_map(|v| Discriminant::fundamental(v).ok()).unwrap();
        assert!(matches!(class_group(big), Err(Error::Resource(_))));
    }
}
