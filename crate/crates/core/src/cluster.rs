//! Two-pole agglomerative clustering of legislators.
//!
//! The two most distant legislators seed the clusters. Unassigned legislators
//! then join one at a time: at each step the (legislator, centroid) pair with
//! the smallest distance is committed and that centroid is updated. A
//! refinement pass afterwards moves legislators that sit strictly closer to
//! the other cluster's centroid until nobody moves.
//!
//! Distances are mean absolute differences of numeric casts over rollcalls
//! both sides voted on. With no shared rollcall the distance is 2, the
//! maximum. Ties always go to the earliest index (legislator order, then
//! cluster x before cluster y).

use rayon::prelude::*;
use serde::Serialize;

use crate::engine::Groups;
use crate::error::{Error, Result};
use crate::model::{Cast, Side, VoteMatrix};

/// Distance assigned to pairs that share no rollcall.
pub const MAX_DISTANCE: f64 = 2.0;

#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    ids: Vec<String>,
    entries: Vec<f64>,
    shared: Vec<usize>,
}

impl DistanceMatrix {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.entries[a * self.ids.len() + b]
    }

    /// Number of rollcalls on which both legislators cast a non-absent vote.
    #[inline]
    pub fn shared(&self, a: usize, b: usize) -> usize {
        self.shared[a * self.ids.len() + b]
    }

    /// The most distant pair `(a, b)` with `a < b`; earliest pair on ties.
    pub fn farthest_pair(&self) -> Option<(usize, usize)> {
        let n = self.len();
        let mut best: Option<(usize, usize, f64)> = None;
        for a in 0..n {
            for b in a + 1..n {
                let d = self.get(a, b);
                if best.is_none_or(|(_, _, bd)| d > bd) {
                    best = Some((a, b, d));
                }
            }
        }
        best.map(|(a, b, _)| (a, b))
    }
}

fn row_distance(a: &[Cast], b: &[Cast]) -> (f64, usize) {
    let mut sum = 0i64;
    let mut n = 0usize;
    for (x, y) in a.iter().zip(b) {
        if let (Some(x), Some(y)) = (x.value(), y.value()) {
            sum += (x as i64 - y as i64).abs();
            n += 1;
        }
    }
    if n == 0 {
        (MAX_DISTANCE, 0)
    } else {
        (sum as f64 / n as f64, n)
    }
}

/// Mean absolute vote difference for every pair of legislators.
pub fn pairwise_distance(m: &VoteMatrix) -> DistanceMatrix {
    let n = m.n_legislators();
    let rows: Vec<Vec<(f64, usize)>> = (0..n)
        .into_par_iter()
        .map(|a| {
            (0..n)
                .map(|b| {
                    if a == b {
                        (0.0, m.participation(a))
                    } else {
                        row_distance(m.row(a), m.row(b))
                    }
                })
                .collect()
        })
        .collect();
    let (entries, shared) = rows.into_iter().flatten().unzip();
    DistanceMatrix {
        ids: m.legislators().iter().map(|l| l.id.clone()).collect(),
        entries,
        shared,
    }
}

/// Per-rollcall sums and counts of member casts; the centroid value is
/// their ratio, undefined where no member voted.
#[derive(Clone, Debug)]
struct CentroidAcc {
    sum: Vec<i64>,
    count: Vec<u32>,
}

impl CentroidAcc {
    fn new(n_rollcalls: usize) -> Self {
        CentroidAcc {
            sum: vec![0; n_rollcalls],
            count: vec![0; n_rollcalls],
        }
    }

    fn add(&mut self, row: &[Cast]) {
        for (j, c) in row.iter().enumerate() {
            if let Some(v) = c.value() {
                self.sum[j] += v as i64;
                self.count[j] += 1;
            }
        }
    }

    fn values(&self) -> Vec<Option<f64>> {
        self.sum
            .iter()
            .zip(&self.count)
            .map(|(&s, &n)| (n > 0).then(|| s as f64 / n as f64))
            .collect()
    }
}

/// Per-rollcall mean of the members' numeric casts.
pub fn centroid(m: &VoteMatrix, members: impl IntoIterator<Item = usize>) -> Vec<Option<f64>> {
    let mut acc = CentroidAcc::new(m.n_rollcalls());
    for i in members {
        acc.add(m.row(i));
    }
    acc.values()
}

/// Mean absolute difference between a legislator's casts and a centroid over
/// rollcalls where both are defined; [`MAX_DISTANCE`] if there are none.
pub fn distance_to_centroid(row: &[Cast], centroid: &[Option<f64>]) -> f64 {
    let mut sum = 0.0;
    let mut n = 0usize;
    for (c, m) in row.iter().zip(centroid) {
        if let (Some(v), Some(m)) = (c.value(), m) {
            sum += (v as f64 - m).abs();
            n += 1;
        }
    }
    if n == 0 {
        MAX_DISTANCE
    } else {
        sum / n as f64
    }
}

/// How the LEFT label was chosen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", content = "legislator", rename_all = "kebab-case")]
pub enum LabelRule {
    /// The cluster holding the first seed is LEFT.
    FirstSeed(String),
    /// The cluster holding this legislator is LEFT.
    Anchor(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolarityPartition {
    pub ids: Vec<String>,
    pub assignment: Vec<Side>,
    pub left_centroid: Vec<Option<f64>>,
    pub right_centroid: Vec<Option<f64>>,
    /// Indices of the two seeds; the first one initially defines LEFT.
    pub seeds: (usize, usize),
    /// Refinement sweeps executed.
    pub iterations: usize,
    pub converged: bool,
    /// Legislators moved during refinement.
    pub moves: usize,
    /// Moves refused because they would have emptied a cluster.
    pub refused_moves: usize,
    pub label_rule: LabelRule,
}

impl PolarityPartition {
    pub fn side(&self, legislator: usize) -> Side {
        self.assignment[legislator]
    }

    pub fn centroid(&self, side: Side) -> &[Option<f64>] {
        match side {
            Side::Left => &self.left_centroid,
            Side::Right => &self.right_centroid,
        }
    }

    pub fn members(&self, side: Side) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&i| self.assignment[i] == side)
            .collect()
    }

    pub fn groups(&self) -> Groups {
        self.ids
            .iter()
            .cloned()
            .zip(self.assignment.iter().copied())
            .collect()
    }

    /// Same partition with LEFT and RIGHT exchanged.
    pub fn swapped(&self) -> PolarityPartition {
        PolarityPartition {
            assignment: self.assignment.iter().map(|s| s.opposite()).collect(),
            left_centroid: self.right_centroid.clone(),
            right_centroid: self.left_centroid.clone(),
            ..self.clone()
        }
    }
}

/// Seeds two clusters with the farthest pair and grows them one legislator
/// at a time. The first seed's cluster is labelled LEFT.
pub fn agglomerate(m: &VoteMatrix, d: &DistanceMatrix) -> Result<PolarityPartition> {
    let n = m.n_legislators();
    if n < 2 {
        return Err(Error::CannotBipartition(n));
    }
    if d.len() != n {
        return Err(Error::Config(format!(
            "distance matrix covers {} legislators, vote matrix has {n}",
            d.len()
        )));
    }
    let (x, y) = d.farthest_pair().expect("n >= 2");

    let mut accs = [
        CentroidAcc::new(m.n_rollcalls()),
        CentroidAcc::new(m.n_rollcalls()),
    ];
    let mut assignment: Vec<Option<Side>> = vec![None; n];
    accs[0].add(m.row(x));
    accs[1].add(m.row(y));
    assignment[x] = Some(Side::Left);
    assignment[y] = Some(Side::Right);

    let mut pool: Vec<usize> = (0..n).filter(|&i| i != x && i != y).collect();
    // cached distance of each pooled legislator to each centroid
    let mut dist = vec![[0.0f64; 2]; n];
    for k in 0..2 {
        let c = accs[k].values();
        for &i in &pool {
            dist[i][k] = distance_to_centroid(m.row(i), &c);
        }
    }

    while !pool.is_empty() {
        let mut best: Option<(usize, usize, f64)> = None;
        for (pos, &i) in pool.iter().enumerate() {
            for (k, &d) in dist[i].iter().enumerate() {
                if best.is_none_or(|(_, _, bd)| d < bd) {
                    best = Some((pos, k, d));
                }
            }
        }
        let (pos, k, _) = best.expect("pool is non-empty");
        let i = pool.remove(pos);
        accs[k].add(m.row(i));
        assignment[i] = Some(if k == 0 { Side::Left } else { Side::Right });
        let c = accs[k].values();
        for &p in &pool {
            dist[p][k] = distance_to_centroid(m.row(p), &c);
        }
    }

    Ok(PolarityPartition {
        ids: m.legislators().iter().map(|l| l.id.clone()).collect(),
        assignment: assignment
            .into_iter()
            .map(|s| s.expect("all assigned"))
            .collect(),
        left_centroid: accs[0].values(),
        right_centroid: accs[1].values(),
        seeds: (x, y),
        iterations: 0,
        converged: false,
        moves: 0,
        refused_moves: 0,
        label_rule: LabelRule::FirstSeed(m.legislators()[x].id.clone()),
    })
}

/// Batch refinement: each sweep recomputes both centroids and moves every
/// legislator strictly closer to the other centroid. Stops when no move is
/// wanted (`converged`) or after `max_iters` sweeps. A move that would empty
/// its cluster is refused and counted.
pub fn refine(p: &PolarityPartition, m: &VoteMatrix, max_iters: usize) -> PolarityPartition {
    let mut out = p.clone();
    out.converged = false;
    let n = out.assignment.len();
    debug_assert_eq!(n, m.n_legislators());

    for _ in 0..max_iters {
        out.iterations += 1;
        let cents = [
            centroid(m, out.members(Side::Left)),
            centroid(m, out.members(Side::Right)),
        ];
        let wanted: Vec<usize> = (0..n)
            .filter(|&i| {
                let own = out.assignment[i];
                let row = m.row(i);
                distance_to_centroid(row, &cents[own.opposite().index()])
                    < distance_to_centroid(row, &cents[own.index()])
            })
            .collect();
        if wanted.is_empty() {
            out.converged = true;
            break;
        }
        let mut sizes = [
            out.members(Side::Left).len(),
            out.members(Side::Right).len(),
        ];
        let mut moved = 0;
        for i in wanted {
            let own = out.assignment[i];
            if sizes[own.index()] == 1 {
                out.refused_moves += 1;
                continue;
            }
            sizes[own.index()] -= 1;
            sizes[own.opposite().index()] += 1;
            out.assignment[i] = own.opposite();
            moved += 1;
        }
        out.moves += moved;
        if moved == 0 {
            break;
        }
    }

    out.left_centroid = centroid(m, out.members(Side::Left));
    out.right_centroid = centroid(m, out.members(Side::Right));
    out
}

/// Chooses which cluster is LEFT: the anchor's cluster if given, otherwise
/// the cluster holding the first seed.
pub fn orient_labels(p: &PolarityPartition, anchor: Option<&str>) -> Result<PolarityPartition> {
    let (idx, rule) = match anchor {
        Some(id) => {
            let idx = p
                .ids
                .iter()
                .position(|x| x == id)
                .ok_or_else(|| Error::UnknownLegislator(id.to_string()))?;
            (idx, LabelRule::Anchor(id.to_string()))
        }
        None => (p.seeds.0, LabelRule::FirstSeed(p.ids[p.seeds.0].clone())),
    };
    let mut out = if p.assignment[idx] == Side::Right {
        p.swapped()
    } else {
        p.clone()
    };
    out.label_rule = rule;
    Ok(out)
}

/// Distance matrix, agglomeration, refinement and labelling in one call.
pub fn bipartition(
    m: &VoteMatrix,
    max_refine_iters: usize,
    anchor: Option<&str>,
) -> Result<PolarityPartition> {
    let d = pairwise_distance(m);
    let p = agglomerate(m, &d)?;
    let p = refine(&p, m, max_refine_iters);
    orient_labels(&p, anchor)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace_matrix() -> VoteMatrix {
        VoteMatrix::from_values(
            &["L1", "L2", "R1", "R2"],
            &[
                vec![1, 1, 1],
                vec![1, 1, -1],
                vec![-1, -1, -1],
                vec![-1, -1, 1],
            ],
            "2020-01-01",
        )
        .unwrap()
    }

    #[test]
    fn distance_examples() {
        let m = VoteMatrix::from_values(
            &["x", "y", "z", "w"],
            &[
                vec![1, 1, 1],
                vec![-1, -1, -1],
                vec![1, 1, -1],
                vec![1, 1, 1],
            ],
            "2020-01-01",
        )
        .unwrap();
        let d = pairwise_distance(&m);
        assert_eq!(d.get(0, 1), 2.0);
        assert_eq!(d.get(0, 3), 0.0);
        assert!((d.get(0, 2) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(d.get(2, 2), 0.0);
        assert_eq!(d.shared(0, 1), 3);
    }

    #[test]
    fn no_shared_rollcalls_is_max_distance() {
        let m = VoteMatrix::from_rows(
            &["a", "b"],
            &[vec![Cast::Yea, Cast::Absent], vec![Cast::Absent, Cast::Yea]],
            "2020-01-01",
        )
        .unwrap();
        let d = pairwise_distance(&m);
        assert_eq!(d.get(0, 1), MAX_DISTANCE);
        assert_eq!(d.shared(0, 1), 0);
    }

    #[test]
    fn hand_traced_agglomeration() {
        let m = trace_matrix();
        let d = pairwise_distance(&m);
        assert_eq!(d.farthest_pair(), Some((0, 2)));
        let p = agglomerate(&m, &d).unwrap();
        assert_eq!(p.seeds, (0, 2));
        assert_eq!(
            p.assignment,
            [Side::Left, Side::Left, Side::Right, Side::Right]
        );
        // L2 to the L1 centroid: |1-1|,|1-1|,|-1-1| over 3 = 2/3
        let l1 = centroid(&m, [0]);
        let r1 = centroid(&m, [2]);
        assert!((distance_to_centroid(m.row(1), &l1) - 2.0 / 3.0).abs() < 1e-15);
        assert!((distance_to_centroid(m.row(1), &r1) - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn fewer_than_two_cannot_bipartition() {
        let m = VoteMatrix::from_values(&["a"], &[vec![1]], "2020-01-01").unwrap();
        let d = pairwise_distance(&m);
        assert!(matches!(
            agglomerate(&m, &d),
            Err(Error::CannotBipartition(1))
        ));
    }

    #[test]
    fn equidistant_goes_to_first_cluster() {
        // c agrees with a on one vote and with b on the other
        let m = VoteMatrix::from_values(
            &["a", "b", "c"],
            &[vec![1, 1], vec![-1, -1], vec![1, -1]],
            "2020-01-01",
        )
        .unwrap();
        let d = pairwise_distance(&m);
        let first = agglomerate(&m, &d).unwrap();
        assert_eq!(first.assignment[2], Side::Left);
        for _ in 0..5 {
            assert_eq!(agglomerate(&m, &d).unwrap(), first);
        }
    }

    #[test]
    fn consistent_partition_is_fixed_point() {
        let m = trace_matrix();
        let p = agglomerate(&m, &pairwise_distance(&m)).unwrap();
        let r = refine(&p, &m, 100);
        assert!(r.converged);
        assert_eq!(r.iterations, 1);
        assert_eq!(r.moves, 0);
        assert_eq!(r.assignment, p.assignment);
    }

    #[test]
    fn misassigned_legislator_moves_back() {
        let m = trace_matrix();
        let mut p = agglomerate(&m, &pairwise_distance(&m)).unwrap();
        p.assignment[1] = Side::Right;
        let r = refine(&p, &m, 100);
        assert!(r.converged);
        assert!(r.iterations <= 2);
        assert_eq!(r.assignment[1], Side::Left);
        assert_eq!(r.moves, 1);
    }

    #[test]
    fn zero_budget_returns_input() {
        let m = trace_matrix();
        let p = agglomerate(&m, &pairwise_distance(&m)).unwrap();
        let r = refine(&p, &m, 0);
        assert!(!r.converged);
        assert_eq!(r.assignment, p.assignment);
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn anchor_swaps_labels() {
        let m = trace_matrix();
        let p = bipartition(&m, 100, None).unwrap();
        assert_eq!(p.side(0), Side::Left);
        let q = orient_labels(&p, Some("R2")).unwrap();
        assert_eq!(q.side(3), Side::Left);
        assert_eq!(q.side(0), Side::Right);
        assert_eq!(q.left_centroid, p.right_centroid);
        assert_eq!(q.label_rule, LabelRule::Anchor("R2".into()));
        assert!(matches!(
            orient_labels(&p, Some("nobody")),
            Err(Error::UnknownLegislator(_))
        ));
    }
}
