//! Ideal class group of a quadratic field from reduced forms of the field
//! discriminant.
//!
//! For real fields the reduced forms fall into rho-cycles (proper classes);
//! the cycle of `(a,b,c)` is merged with that of `(−a,b,−c)`, which turns the
//! form class group into the ideal class group in the wide sense.

use std::collections::{BTreeMap, HashMap};

use num_integer::Roots;

use super::forms::BinaryForm;
use crate::error::FieldError;

type Form = BinaryForm<i128>;

#[derive(Debug, Clone)]
pub struct ClassGroup {
    disc: i128,
    /// isqrt(disc) for real fields.
    sqrt_disc: i128,
    /// One representative with `a > 0` per class; index 0 is the identity.
    reps: Vec<Form>,
    lookup: HashMap<Form, usize>,
    orders: Vec<u64>,
    structure: Vec<u64>,
}

fn sort_key(f: &Form) -> (i128, i128, i128) {
    (f.a.abs(), f.a.signum(), f.b)
}

impl ClassGroup {
    pub fn compute(disc: i64) -> Result<Self, FieldError> {
        let disc = disc as i128;
        let mut group = if disc < 0 {
            Self::imaginary(disc)
        } else {
            Self::real(disc)
        };
        group.orders = (0..group.reps.len())
            .map(|i| group.order_of_class(i))
            .collect::<Result<_, _>>()?;
        group.structure = invariant_factors(&group.orders);
        Ok(group)
    }

    fn imaginary(disc: i128) -> Self {
        let mut forms = Vec::new();
        let a_max = (-disc / 3).sqrt();
        for a in 1..=a_max {
            for b in -a + 1..=a {
                if (b - disc).rem_euclid(2) != 0 {
                    continue;
                }
                if let Some(f) = Form::from_ab(a, b, &disc) {
                    if f.is_reduced_definite() {
                        forms.push(f);
                    }
                }
            }
        }
        forms.sort_by_key(sort_key);
        let lookup = forms
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), i))
            .collect();
        ClassGroup {
            disc,
            sqrt_disc: 0,
            reps: forms,
            lookup,
            orders: Vec::new(),
            structure: Vec::new(),
        }
    }

    fn real(disc: i128) -> Self {
        let s = disc.sqrt();
        let mut forms = Vec::new();
        for b in 1..=s {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            // ac = (b² − disc)/4 < 0
            let m = (disc - b * b) / 4;
            for a_abs in crate::arith::divisors(m as u64) {
                let a_abs = a_abs as i128;
                for a in [a_abs, -a_abs] {
                    let f = Form::new(a, b, -m / a);
                    if f.is_reduced_indefinite(&s) {
                        forms.push(f);
                    }
                }
            }
        }
        forms.sort_by_key(sort_key);
        let index: HashMap<Form, usize> = forms
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), i))
            .collect();

        let mut uf = UnionFind::new(forms.len());
        for (i, f) in forms.iter().enumerate() {
            let (next, _) = f.rho_indefinite(&s);
            uf.union(i, index[&next]);
            uf.union(i, index[&f.negated()]);
        }

        // Representative per class: smallest form (by sort key) with a > 0.
        let mut class_of_root: BTreeMap<usize, usize> = BTreeMap::new();
        let mut reps = Vec::new();
        for (i, f) in forms.iter().enumerate() {
            if f.a > 0 {
                let root = uf.find(i);
                class_of_root.entry(root).or_insert_with(|| {
                    reps.push(f.clone());
                    reps.len() - 1
                });
            }
        }
        let lookup = forms
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), class_of_root[&uf.find(i)]))
            .collect();
        ClassGroup {
            disc,
            sqrt_disc: s,
            reps,
            lookup,
            orders: Vec::new(),
            structure: Vec::new(),
        }
    }

    pub fn order(&self) -> u64 {
        self.reps.len() as u64
    }

    pub fn exponent(&self) -> u64 {
        self.structure.last().copied().unwrap_or(1)
    }

    /// Invariant factors `n_1 | n_2 | ... | n_k`, ascending; empty for the trivial group.
    pub fn structure(&self) -> &[u64] {
        &self.structure
    }

    pub fn reps(&self) -> &[BinaryForm<i128>] {
        &self.reps
    }

    pub fn element_orders(&self) -> &[u64] {
        &self.orders
    }

    /// The class of an arbitrary primitive form of the field discriminant.
    pub fn class_of(&self, f: &BinaryForm<i128>) -> Result<usize, FieldError> {
        let reduced = if self.disc < 0 {
            f.reduce_definite().0
        } else {
            f.reduce_indefinite(&self.sqrt_disc).0
        };
        self.lookup.get(&reduced).copied().ok_or_else(|| {
            FieldError::Internal(format!(
                "form ({}, {}, {}) reduced to an unknown form",
                f.a, f.b, f.c
            ))
        })
    }

    pub fn compose(&self, i: usize, j: usize) -> Result<usize, FieldError> {
        let (f, _) = self.reps[i].compose_unreduced(&self.reps[j]);
        self.class_of(&f)
    }

    fn order_of_class(&self, i: usize) -> Result<u64, FieldError> {
        let mut k = 1u64;
        let mut cur = i;
        while cur != 0 {
            cur = self.compose(cur, i)?;
            k += 1;
            if k > self.reps.len() as u64 {
                return Err(FieldError::Internal(format!(
                    "class of ({}, {}, {}) has no finite order",
                    self.reps[i].a, self.reps[i].b, self.reps[i].c
                )));
            }
        }
        Ok(k)
    }

    /// Order of the class of the form `(a, b, c)`.
    pub fn order_of_form(&self, f: &BinaryForm<i128>) -> Result<u64, FieldError> {
        let idx = self.class_of(f)?;
        Ok(self.orders[idx])
    }

    pub fn is_principal(&self, f: &BinaryForm<i128>) -> Result<bool, FieldError> {
        Ok(self.class_of(f)? == 0)
    }
}

/// Invariant factors of a finite abelian group from the multiset of its
/// element orders: the count of elements killed by `ℓ^k` fixes the ℓ-part.
pub fn invariant_factors(orders: &[u64]) -> Vec<u64> {
    let h = orders.len() as u64;
    if h <= 1 {
        return Vec::new();
    }
    let mut factors: Vec<u64> = Vec::new();
    for (ell, _) in num_prime::nt_funcs::factorize64(h) {
        // rank_at[k-1] = number of invariant factors divisible by ℓ^k
        let mut rank_at = Vec::new();
        let mut prev = 1u64;
        let mut pk = ell;
        loop {
            let count = orders.iter().filter(|&&o| pk % o == 0).count() as u64;
            if count == prev {
                break;
            }
            let mut ratio = count / prev;
            let mut rank = 0usize;
            while ratio > 1 {
                ratio /= ell;
                rank += 1;
            }
            rank_at.push(rank);
            prev = count;
            pk *= ell;
        }
        let width = rank_at.first().copied().unwrap_or(0);
        if factors.len() < width {
            factors.resize(width, 1);
        }
        // factors are kept largest-first while building
        for (i, f) in factors.iter_mut().enumerate().take(width) {
            let e = rank_at.iter().filter(|&&r| r > i).count() as u32;
            *f *= ell.pow(e);
        }
    }
    factors.reverse();
    factors
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}
