//! Arnold cat-map scrambling of square binary matrices.
//!
//! One step moves the cell at (x, y) to ((x + y) mod N, (x + 2y) mod N),
//! with x the column and y the row. The map is a bijection on the N x N
//! grid and is periodic; `period` finds the order by direct iteration.

use crate::error::{Result, WmarkError};
use crate::plane::BitMatrix;

/// One forward application of the cat map.
pub fn arnold_step(m: &BitMatrix) -> BitMatrix {
    let n = m.side();
    let mut out = BitMatrix::new(n);
    for y in 0..n {
        for x in 0..n {
            let nx = (x + y) % n;
            let ny = (x + 2 * y) % n;
            out.set(nx, ny, m.get(x, y));
        }
    }
    out
}

/// One application of the inverse map, using the modular inverse matrix
/// [[2, -1], [-1, 1]].
pub fn arnold_step_inverse(m: &BitMatrix) -> BitMatrix {
    let n = m.side() as i64;
    let side = m.side();
    let mut out = BitMatrix::new(side);
    for y in 0..side {
        for x in 0..side {
            let xi = x as i64;
            let yi = y as i64;
            let ox = (2 * xi - yi).rem_euclid(n) as usize;
            let oy = (-xi + yi).rem_euclid(n) as usize;
            out.set(ox, oy, m.get(x, y));
        }
    }
    out
}

/// Apply the cat map `times` times.
pub fn scramble(m: &BitMatrix, times: u64) -> BitMatrix {
    let mut cur = m.clone();
    for _ in 0..times {
        cur = arnold_step(&cur);
    }
    cur
}

/// Undo `times` forward applications exactly.
pub fn unscramble(m: &BitMatrix, times: u64) -> BitMatrix {
    let mut cur = m.clone();
    for _ in 0..times {
        cur = arnold_step_inverse(&cur);
    }
    cur
}

/// Smallest p >= 1 with p applications restoring every cell position.
pub fn period(n: usize) -> u64 {
    assert!(n >= 1, "side must be at least 1");
    if n == 1 {
        return 1;
    }
    // Track where each grid position lands; stop when back to identity.
    let idx = |x: usize, y: usize| y * n + x;
    let mut perm: Vec<usize> = (0..n * n).collect();
    let mut p = 0u64;
    loop {
        let mut next = vec![0usize; n * n];
        for y in 0..n {
            for x in 0..n {
                let nx = (x + y) % n;
                let ny = (x + 2 * y) % n;
                next[idx(nx, ny)] = perm[idx(x, y)];
            }
        }
        perm = next;
        p += 1;
        if perm.iter().enumerate().all(|(i, &v)| i == v) {
            return p;
        }
    }
}

/// Reject iteration counts at or beyond the map period.
pub fn validate_times(side: usize, times: u64) -> Result<()> {
    let p = period(side);
    if times >= p {
        return Err(WmarkError::ArnoldTimesOutOfRange {
            times,
            period: p,
            side,
        });
    }
    Ok(())
}
