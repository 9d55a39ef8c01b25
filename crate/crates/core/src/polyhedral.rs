//! Exact polyhedral computations for cones `{x : A x >= 0}` over the integers.
//!
//! Vectors are `i128` kept primitive after every combination; any overflow
//! is reported as an error rather than wrapped.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

pub type Vector = Vec<i128>;

fn overflow() -> Error {
    Error::Consistency("integer overflow in cone computation".into())
}

pub fn dot(a: &[i128], b: &[i128]) -> Result<i128> {
    a.iter().zip(b).try_fold(0i128, |acc, (x, y)| {
        x.checked_mul(*y).and_then(|p| acc.checked_add(p)).ok_or_else(overflow)
    })
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Divides out the content of `v`; the zero vector is returned unchanged.
pub fn primitive(mut v: Vector) -> Vector {
    let g = v.iter().fold(0, |acc, &x| gcd(acc, x));
    if g > 1 {
        for x in &mut v {
            *x /= g;
        }
    }
    v
}

/// Primitive form of `ca * a + cb * b`.
fn combine(ca: i128, a: &[i128], cb: i128, b: &[i128]) -> Result<Vector> {
    let v = a
        .iter()
        .zip(b)
        .map(|(x, y)| {
            let l = ca.checked_mul(*x).ok_or_else(overflow)?;
            let r = cb.checked_mul(*y).ok_or_else(overflow)?;
            l.checked_add(r).ok_or_else(overflow)
        })
        .collect::<Result<Vector>>()?;
    Ok(primitive(v))
}

/// Rank over the rationals.
pub fn rank(vectors: &[Vector], dim: usize) -> usize {
    integer_rank(vectors, dim).unwrap_or_else(|_| rational_rank(vectors, dim))
}

/// Incremental echelon form with primitive integer rows.
fn integer_rank(vectors: &[Vector], dim: usize) -> Result<usize> {
    let mut basis: Vec<(usize, Vector)> = Vec::new();
    for v in vectors {
        let mut v = v.clone();
        for (col, row) in &basis {
            if v[*col] != 0 {
                v = combine(row[*col], &v, -v[*col], row)?;
            }
        }
        if let Some(col) = (0..dim).find(|&c| v[c] != 0) {
            basis.push((col, v));
            if basis.len() == dim {
                break;
            }
        }
    }
    Ok(basis.len())
}

fn rational_rank(vectors: &[Vector], dim: usize) -> usize {
    let mut m: Vec<Vec<BigRational>> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let mut r = 0;
    for col in 0..dim {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][col].clone();
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = &m[i][col] / &pivot;
                for j in col..dim {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Distinct nonzero primitive rows, sorted.
pub fn normalize_rows(rows: &[Vector]) -> Vec<Vector> {
    let set: BTreeSet<Vector> = rows
        .iter()
        .map(|r| primitive(r.clone()))
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    set.into_iter().collect()
}

#[derive(Clone, Debug)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64).max(1)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn contains_all(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }
}

/// Extreme rays of the pointed full-dimensional cone `{x : row . x >= 0}`,
/// by the double description method. Rays are primitive and sorted.
pub fn extreme_rays(rows: &[Vector], dim: usize) -> Result<Vec<Vector>> {
    let rows = normalize_rows(rows);
    let mut lineality: Vec<Vector> = (0..dim)
        .map(|i| {
            let mut e = vec![0; dim];
            e[i] = 1;
            e
        })
        .collect();
    let mut rays: Vec<(Vector, Bits)> = Vec::new();
    for (k, a) in rows.iter().enumerate() {
        let mut pivot = None;
        for (j, l) in lineality.iter().enumerate() {
            if dot(a, l)? != 0 {
                pivot = Some(j);
                break;
            }
        }
        if let Some(j) = pivot {
            let mut l0 = lineality.remove(j);
            if dot(a, &l0)? < 0 {
                l0.iter_mut().for_each(|x| *x = -*x);
            }
            let s0 = dot(a, &l0)?;
            for l in lineality.iter_mut() {
                let s = dot(a, l)?;
                *l = combine(s0, l, -s, &l0)?;
            }
            let mut fresh_tight = Bits::new(rows.len());
            for i in 0..k {
                fresh_tight.insert(i);
            }
            for (r, tight) in rays.iter_mut() {
                let s = dot(a, r)?;
                *r = combine(s0, r, -s, &l0)?;
                tight.insert(k);
            }
            rays.push((l0, fresh_tight));
            continue;
        }
        let values: Vec<i128> = rays.iter().map(|(r, _)| dot(a, r)).collect::<Result<_>>()?;
        let mut next: Vec<(Vector, Bits)> = Vec::new();
        for (idx, (r, tight)) in rays.iter().enumerate() {
            if values[idx] >= 0 {
                let mut t = tight.clone();
                if values[idx] == 0 {
                    t.insert(k);
                }
                next.push((r.clone(), t));
            }
        }
        for p in (0..rays.len()).filter(|&i| values[i] > 0) {
            for q in (0..rays.len()).filter(|&i| values[i] < 0) {
                let common = rays[p].1.and(&rays[q].1);
                let adjacent = !(0..rays.len()).any(|r| r != p && r != q && rays[r].1.contains_all(&common));
                if adjacent {
                    let v = combine(values[p], &rays[q].0, -values[q], &rays[p].0)?;
                    let mut t = common;
                    t.insert(k);
                    next.push((v, t));
                }
            }
        }
        rays = next;
    }
    if !lineality.is_empty() {
        return Err(Error::Consistency(format!(
            "cone contains a line (lineality dimension {})",
            lineality.len()
        )));
    }
    let out: BTreeSet<Vector> = rays.into_iter().map(|(r, _)| r).collect();
    let out: Vec<Vector> = out.into_iter().collect();
    if rank(&out, dim) != dim {
        return Err(Error::Consistency("cone is not full-dimensional".into()));
    }
    Ok(out)
}

/// Cap on the size of an intermediate Fourier-Motzkin system.
pub const FM_ROW_LIMIT: usize = 200_000;

/// Extreme rays by Fourier-Motzkin elimination: project
/// `{(y, l) : y = A^T l, l >= 0}` onto `y`, read candidate rays off the
/// resulting inequalities and keep the extremal ones.
pub fn fourier_motzkin_rays(rows: &[Vector], dim: usize) -> Result<Vec<Vector>> {
    let rows = normalize_rows(rows);
    let m = rows.len();
    let width = dim + m;
    let originals = 2 * dim + m;
    // Each inequality: coefficients over (y, l) and the set of originals used.
    let mut system: Vec<(Vector, Bits)> = Vec::with_capacity(originals);
    let push = |coeffs: Vector, idx: usize, system: &mut Vec<(Vector, Bits)>| {
        let mut h = Bits::new(originals);
        h.insert(idx);
        system.push((coeffs, h));
    };
    for k in 0..dim {
        let mut c = vec![0; width];
        c[k] = 1;
        for (j, row) in rows.iter().enumerate() {
            c[dim + j] = -row[k];
        }
        let neg = c.iter().map(|x| -x).collect();
        push(c, 2 * k, &mut system);
        push(neg, 2 * k + 1, &mut system);
    }
    for j in 0..m {
        let mut c = vec![0; width];
        c[dim + j] = 1;
        push(c, 2 * dim + j, &mut system);
    }
    let mut remaining: Vec<usize> = (dim..width).collect();
    for eliminated in 0..m {
        // eliminate the variable producing the fewest combinations
        let cost = |j: usize| {
            let p = system.iter().filter(|e| e.0[j] > 0).count();
            let n = system.iter().filter(|e| e.0[j] < 0).count();
            p * n
        };
        let pick = (0..remaining.len()).min_by_key(|&i| cost(remaining[i])).expect("variables remain");
        let j = remaining.swap_remove(pick);
        if system.len() + cost(j) > FM_ROW_LIMIT {
            return Err(Error::Budget(format!(
                "Fourier-Motzkin elimination exceeds {} inequalities",
                FM_ROW_LIMIT
            )));
        }
        let (mut pos, mut neg, mut next) = (Vec::new(), Vec::new(), Vec::new());
        for entry in system {
            match entry.0[j].signum() {
                1 => pos.push(entry),
                -1 => neg.push(entry),
                _ => next.push(entry),
            }
        }
        for (p, hp) in &pos {
            for (q, hq) in &neg {
                let mut h = hp.clone();
                for (a, b) in h.0.iter_mut().zip(&hq.0) {
                    *a |= b;
                }
                // Chernikov: more than eliminated + 2 originals means redundant.
                let used: u32 = h.0.iter().map(|w| w.count_ones()).sum();
                if used as usize > eliminated + 2 {
                    continue;
                }
                let v = combine(-q[j], p, p[j], q)?;
                if v.iter().any(|&x| x != 0) {
                    next.push((v, h));
                }
            }
        }
        next.sort_by(|a, b| a.0.cmp(&b.0));
        next.dedup_by(|a, b| a.0 == b.0);
        system = next;
    }
    let mut candidates: BTreeSet<Vector> = BTreeSet::new();
    for (c, _) in system {
        let y = primitive(c[..dim].to_vec());
        if y.iter().all(|&x| x == 0) {
            continue;
        }
        let mut tight = Vec::new();
        let mut inside = true;
        for row in &rows {
            match dot(row, &y)?.signum() {
                -1 => {
                    inside = false;
                    break;
                }
                0 => tight.push(row.clone()),
                _ => {}
            }
        }
        if inside && rank(&tight, dim) + 1 == dim {
            candidates.insert(y);
        }
    }
    Ok(candidates.into_iter().collect())
}

/// Rows (distinct, primitive) whose tight rays span a hyperplane.
pub fn facets(rows: &[Vector], rays: &[Vector], dim: usize) -> Result<Vec<Vector>> {
    let mut out = Vec::new();
    for row in normalize_rows(rows) {
        let tight: Vec<Vector> = rays
            .iter()
            .filter(|r| dot(&row, r).map(|x| x == 0).unwrap_or(false))
            .cloned()
            .collect();
        if rank(&tight, dim) + 1 == dim {
            out.push(row);
        }
    }
    Ok(out)
}

/// Every nonempty proper face of the cone, as a sorted set of ray indices,
/// obtained by intersecting facet ray sets.
pub fn faces(rays: &[Vector], facets: &[Vector]) -> Result<Vec<Vec<usize>>> {
    let words = rays.len().div_ceil(64).max(1);
    let mut base: Vec<Vec<u64>> = Vec::new();
    for f in facets {
        let mut set = vec![0u64; words];
        for (i, r) in rays.iter().enumerate() {
            if dot(f, r)? == 0 {
                set[i / 64] |= 1 << (i % 64);
            }
        }
        if set.iter().any(|&w| w != 0) {
            base.push(set);
        }
    }
    base.sort();
    base.dedup();
    let mut found: HashSet<Vec<u64>> = base.iter().cloned().collect();
    let mut frontier: Vec<Vec<u64>> = base.clone();
    while let Some(set) = frontier.pop() {
        for b in &base {
            let meet: Vec<u64> = set.iter().zip(b).map(|(x, y)| x & y).collect();
            if meet.iter().any(|&w| w != 0) && !found.contains(&meet) {
                found.insert(meet.clone());
                frontier.push(meet);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = found
        .into_iter()
        .map(|set| (0..rays.len()).filter(|&i| set[i / 64] >> (i % 64) & 1 == 1).collect())
        .collect();
    out.sort();
    Ok(out)
}

/// Sum of `vectors`, made primitive.
pub fn primitive_sum(vectors: &[&Vector], dim: usize) -> Result<Vector> {
    let mut sum = vec![0i128; dim];
    for v in vectors {
        for (s, x) in sum.iter_mut().zip(v.iter()) {
            *s = s.checked_add(*x).ok_or_else(overflow)?;
        }
    }
    Ok(primitive(sum))
}
