//! Double description over primitive integer vectors.
//!
//! Computes a minimal generating set (lineality basis plus extreme rays) of
//! `{x : h·x >= 0 for h in inequalities, h·x = 0 for h in equalities}`,
//! inserting the constraints one at a time.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::vector::primitive;

pub(crate) type IntVec = Vec<BigInt>;

#[derive(Clone, Debug, Default)]
pub(crate) struct Generators {
    pub lineality: Vec<IntVec>,
    pub rays: Vec<IntVec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct ZeroSet(Vec<u64>);

impl ZeroSet {
    fn empty(n: usize) -> Self {
        ZeroSet(vec![0; n.div_ceil(64).max(1)])
    }

    fn full_prefix(n: usize, upto: usize) -> Self {
        let mut z = Self::empty(n);
        for i in 0..upto {
            z.insert(i);
        }
        z
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn intersect(&self, other: &ZeroSet) -> ZeroSet {
        ZeroSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_subset_of(&self, other: &ZeroSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

struct Ray {
    v: IntVec,
    zeros: ZeroSet,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `alpha * a - beta * b`, made primitive.
fn combine(alpha: &BigInt, a: &[BigInt], beta: &BigInt, b: &[BigInt]) -> IntVec {
    primitive(a.iter().zip(b).map(|(x, y)| alpha * x - beta * y).collect())
}

pub(crate) fn generators(dim: usize, inequalities: &[IntVec], equalities: &[IntVec]) -> Generators {
    let mut constraints: Vec<(IntVec, bool)> = equalities.iter().map(|h| (h.clone(), true)).collect();
    let mut ineq: Vec<IntVec> = inequalities.to_vec();
    ineq.sort();
    ineq.dedup();
    constraints.extend(ineq.into_iter().map(|h| (h, false)));
    let total = constraints.len();

    let mut lineality: Vec<IntVec> = (0..dim)
        .map(|i| {
            let mut v = vec![BigInt::zero(); dim];
            v[i] = BigInt::from(1);
            v
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (k, (h, is_eq)) in constraints.iter().enumerate() {
        assert_eq!(h.len(), dim, "constraint of wrong dimension");
        if let Some(pos) = lineality.iter().position(|l| !dot(h, l).is_zero()) {
            let mut pivot = lineality.remove(pos);
            let mut hp = dot(h, &pivot);
            if hp.is_negative() {
                pivot.iter_mut().for_each(|x| *x = -&*x);
                hp = -hp;
            }
            for l in &mut lineality {
                let hl = dot(h, l);
                if !hl.is_zero() {
                    *l = combine(&hp, l, &hl, &pivot);
                }
            }
            for r in &mut rays {
                let hr = dot(h, &r.v);
                if !hr.is_zero() {
                    r.v = combine(&hp, &r.v, &hr, &pivot);
                }
                r.zeros.insert(k);
            }
            if !is_eq {
                rays.push(Ray {
                    v: pivot,
                    zeros: ZeroSet::full_prefix(total, k),
                });
            }
            continue;
        }

        let values: Vec<BigInt> = rays.iter().map(|r| dot(h, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();

        let mut fresh = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].zeros.intersect(&rays[n].zeros);
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(i, r)| i != p && i != n && common.is_subset_of(&r.zeros));
                if blocked {
                    continue;
                }
                let v = combine(&values[p], &rays[n].v, &values[n], &rays[p].v);
                let mut zeros = common;
                zeros.insert(k);
                fresh.push(Ray { v, zeros });
            }
        }

        let mut next = Vec::with_capacity(rays.len() + fresh.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if values[i].is_zero() {
                r.zeros.insert(k);
                next.push(r);
            } else if values[i].is_positive() && !is_eq {
                next.push(r);
            }
        }
        next.extend(fresh);
        rays = next;
    }

    let mut out: Vec<IntVec> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    Generators { lineality, rays: out }
}
