//! Pareto dominance (minimization), non-dominated sorting, crowding distance,
//! NSGA-II survivor selection and divide-and-conquer skyline extraction.
//!
//! Functions take any slice of `AsRef<[f64]>` so that owned
//! [`ObjectiveVector`]s, [`FrontMember`]s and borrowed rows of a flat buffer
//! can all be used directly.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::estimator::ObjectiveVector;

/// Below this size the skyline recursion switches to a quadratic filter.
const SKYLINE_CUTOFF: usize = 64;
/// Above this size the two skyline halves are computed in parallel.
const SKYLINE_PARALLEL: usize = 8192;

/// An objective vector tagged with its position in some outer collection.
#[derive(Clone, Debug, PartialEq)]
pub struct FrontMember {
    pub objectives: ObjectiveVector,
    pub payload_index: usize,
}

impl AsRef<[f64]> for FrontMember {
    fn as_ref(&self) -> &[f64] {
        &self.objectives
    }
}

/// `a` is no worse than `b` everywhere and strictly better somewhere.
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::invalid(format!(
            "cannot compare objective vectors of length {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(dominates_unchecked(a, b))
}

#[inline]
pub(crate) fn dominates_unchecked(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly = true;
        }
    }
    strictly
}

fn check_points<P: AsRef<[f64]>>(points: &[P]) -> Result<()> {
    let Some(first) = points.first() else {
        return Err(Error::invalid("empty point set"));
    };
    let m = first.as_ref().len();
    if m == 0 {
        return Err(Error::invalid("objective vectors must not be empty"));
    }
    for (i, p) in points.iter().enumerate() {
        let p = p.as_ref();
        if p.len() != m {
            return Err(Error::invalid(format!("point {i} has {} objectives, expected {m}", p.len())));
        }
        if p.iter().any(|v| v.is_nan()) {
            return Err(Error::invalid(format!("point {i} contains NaN")));
        }
    }
    Ok(())
}

/// Peel successive non-dominated fronts. Indices inside a front ascend.
pub fn fast_nondominated_sort<P: AsRef<[f64]>>(points: &[P]) -> Result<Vec<Vec<usize>>> {
    check_points(points)?;
    let n = points.len();
    let mut dominated_by = vec![0usize; n];
    let mut dominating: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (points[i].as_ref(), points[j].as_ref());
            if dominates_unchecked(a, b) {
                dominating[i].push(j);
                dominated_by[j] += 1;
            } else if dominates_unchecked(b, a) {
                dominating[j].push(i);
                dominated_by[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominating[i] {
                dominated_by[j] -= 1;
                if dominated_by[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    Ok(fronts)
}

/// NSGA-II crowding distance of every member of one front.
///
/// Per objective, members are sorted (ties by position); the two ends get
/// infinity and interior members add `(next - prev) / (max - min)`.
/// Objectives with zero range are skipped entirely.
pub fn crowding_distance<P: AsRef<[f64]>>(front: &[P]) -> Vec<f64> {
    let n = front.len();
    let mut dist = vec![0.0; n];
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let m = front[0].as_ref().len();
    let mut order: Vec<usize> = (0..n).collect();
    for k in 0..m {
        let val = |i: usize| front[i].as_ref()[k];
        order.sort_by(|&a, &b| val(a).total_cmp(&val(b)).then(a.cmp(&b)));
        let (lo, hi) = (val(order[0]), val(order[n - 1]));
        let range = hi - lo;
        if range.is_nan() || range <= 0.0 {
            continue;
        }
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        for w in order.windows(3) {
            dist[w[1]] += (val(w[2]) - val(w[0])) / range;
        }
    }
    dist
}

/// Pick `n` survivors: whole fronts in rank order, then the most isolated
/// members (largest crowding distance, ties to the lower payload index) of
/// the first front that does not fit. Returns payload indices, ascending.
pub fn nsga2_select(members: &[FrontMember], n: usize) -> Result<Vec<usize>> {
    if n > members.len() {
        return Err(Error::invalid(format!(
            "cannot select {n} survivors from {} members",
            members.len()
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    for front in fast_nondominated_sort(members)? {
        let room = n - chosen.len();
        if front.len() <= room {
            chosen.extend(&front);
        } else {
            let points: Vec<&[f64]> = front.iter().map(|&i| members[i].as_ref()).collect();
            let crowd = crowding_distance(&points);
            let mut order: Vec<usize> = (0..front.len()).collect();
            order.sort_by(|&a, &b| {
                crowd[b]
                    .total_cmp(&crowd[a])
                    .then(members[front[a]].payload_index.cmp(&members[front[b]].payload_index))
            });
            chosen.extend(order[..room].iter().map(|&k| front[k]));
        }
        if chosen.len() == n {
            break;
        }
    }
    let mut out: Vec<usize> = chosen.into_iter().map(|i| members[i].payload_index).collect();
    out.sort_unstable();
    Ok(out)
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y).expect("NaN rejected up front") {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Indices (ascending) of the non-dominated points. Equal points are all kept.
///
/// Points are sorted lexicographically, split in halves and solved
/// recursively. No point of the right half can dominate one of the left
/// half, so the merge only filters the right skyline against the left one.
pub fn skyline_dc<P: AsRef<[f64]> + Sync>(points: &[P]) -> Result<Vec<usize>> {
    check_points(points)?;
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| lex_cmp(points[a].as_ref(), points[b].as_ref()).then(a.cmp(&b)));
    let mut out = skyline_rec(points, &order);
    out.sort_unstable();
    Ok(out)
}

fn skyline_rec<P: AsRef<[f64]> + Sync>(points: &[P], sorted: &[usize]) -> Vec<usize> {
    if sorted.len() <= SKYLINE_CUTOFF {
        // In lexicographic order only earlier points can dominate later ones.
        let mut keep = Vec::with_capacity(sorted.len());
        for (k, &i) in sorted.iter().enumerate() {
            let p = points[i].as_ref();
            if !sorted[..k]
                .iter()
                .any(|&j| dominates_unchecked(points[j].as_ref(), p))
            {
                keep.push(i);
            }
        }
        return keep;
    }
    let (left, right) = sorted.split_at(sorted.len() / 2);
    let (mut lsky, rsky) = if sorted.len() > SKYLINE_PARALLEL {
        rayon::join(|| skyline_rec(points, left), || skyline_rec(points, right))
    } else {
        (skyline_rec(points, left), skyline_rec(points, right))
    };
    let survivors: Vec<usize> = rsky
        .into_iter()
        .filter(|&r| {
            let p = points[r].as_ref();
            !lsky.iter().any(|&l| dominates_unchecked(points[l].as_ref(), p))
        })
        .collect();
    lsky.extend(survivors);
    lsky
}

#[cfg(test)]
mod tests;
