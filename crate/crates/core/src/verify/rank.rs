//! Orbit-tangent rank of the derived parabolic acting on the nilradical at a
//! random point of `e + V`.
//!
//! The derived subalgebra is spanned by the elementary matrices `E_ij` with
//! `block(i) <= block(j)`, `i != j`, and by `E_aa - E_{a+1,a+1}` within a block.
//! The nilradical coordinates are the `(i, j)` with `block(i) < block(j)`.
//! The defect `dim m - rank` is the generic orbit codimension at the sample.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::field::{rank, PrimeField};
use crate::lines::{Coord, WeierstrassSection};
use crate::model::{build_tableau, Composition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RankError {
    #[error("{p} is not a prime below 2^63")]
    NotPrime { p: u64 },
    #[error("prime {p} must exceed n^2 = {n_squared}")]
    PrimeTooSmall { p: u64, n_squared: u64 },
    #[error("at least one trial is required")]
    NoTrials,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCertificate {
    pub composition: Composition,
    pub prime: u64,
    pub seed: u64,
    pub trials: usize,
    pub dim_m: usize,
    pub dim_p_derived: usize,
    pub ranks: Vec<usize>,
    pub expected_defect: usize,
    pub passed: bool,
}

impl RankCertificate {
    pub fn defects(&self) -> Vec<usize> {
        self.ranks.iter().map(|r| self.dim_m - r).collect()
    }
}

pub fn rank_check(
    c: &Composition,
    s: &WeierstrassSection,
    trials: usize,
    prime: u64,
    seed: u64,
) -> Result<RankCertificate, RankError> {
    let f = PrimeField::new(prime).ok_or(RankError::NotPrime { p: prime })?;
    let n = c.n();
    let n_squared = (n as u64).saturating_mul(n as u64);
    if prime <= n_squared {
        return Err(RankError::PrimeTooSmall { p: prime, n_squared });
    }
    if trials == 0 {
        return Err(RankError::NoTrials);
    }
    let (_, t) = build_tableau(c);
    let block: Vec<usize> = (0..=n).map(|e| if e == 0 { 0 } else { t.block_of(e) }).collect();

    let mut m_index = BTreeMap::new();
    for i in 1..=n {
        for j in 1..=n {
            if block[i] < block[j] {
                let next = m_index.len();
                m_index.insert((i, j), next);
            }
        }
    }
    let basis = derived_basis(&block, &f);
    let expected_defect = c.diagram().neighboring_pairs().len();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ranks = Vec::with_capacity(trials);
    for _ in 0..trials {
        let mut x: Vec<(Coord, u64)> = s.e.iter().map(|&ij| (ij, 1)).collect();
        x.extend(s.v.iter().map(|&ij| (ij, rng.random_range(0..prime))));
        let rows = basis
            .iter()
            .map(|p| bracket(p, &x, &m_index, &f))
            .collect::<Vec<_>>();
        ranks.push(rank(&f, rows));
    }
    let dim_m = m_index.len();
    let passed = ranks.iter().all(|&r| dim_m - r == expected_defect);
    Ok(RankCertificate {
        composition: c.clone(),
        prime,
        seed,
        trials,
        dim_m,
        dim_p_derived: basis.len(),
        ranks,
        expected_defect,
        passed,
    })
}

type Sparse = Vec<(Coord, u64)>;

fn derived_basis(block: &[usize], f: &PrimeField) -> Vec<Sparse> {
    let n = block.len() - 1;
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i != j && block[i] <= block[j] {
                out.push(vec![((i, j), 1)]);
            }
        }
    }
    for a in 1..n {
        if block[a] == block[a + 1] {
            out.push(vec![((a, a), 1), ((a + 1, a + 1), f.neg(1))]);
        }
    }
    out
}

/// Coordinates of `px - xp` in the nilradical.
fn bracket(p: &Sparse, x: &Sparse, m_index: &BTreeMap<Coord, usize>, f: &PrimeField) -> Vec<u64> {
    let mut out = vec![0; m_index.len()];
    let mut acc = |coord: Coord, v: u64| {
        let idx = *m_index
            .get(&coord)
            .expect("bracket of the parabolic with the nilradical stays in the nilradical");
        out[idx] = f.add(out[idx], v);
    };
    for &((i, j), a) in p {
        for &((k, l), b) in x {
            if j == k {
                acc((i, l), f.mul(a, b));
            }
            if l == i {
                acc((k, j), f.neg(f.mul(a, b)));
            }
        }
    }
    out
}
