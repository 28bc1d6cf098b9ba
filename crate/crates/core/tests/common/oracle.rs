//! Naive step-by-step TOPSIS used only to cross-check the engine. Written
//! against plain nested vectors and shares no code with the library.

#![allow(clippy::needless_range_loop, dead_code)]

pub struct Naive {
    pub weighted: Vec<Vec<f64>>,
    pub pis: Vec<f64>,
    pub nis: Vec<f64>,
    pub s_plus: Vec<f64>,
    pub s_minus: Vec<f64>,
    pub closeness: Vec<f64>,
    pub ranks: Vec<usize>,
}

/// `benefit[j]` marks benefit criteria; `honor_kinds = false` treats every
/// criterion as benefit. `squared` skips the square root of the distances.
/// Returns `None` when some alternative has zero total separation.
pub fn naive_topsis(
    scores: &[Vec<f64>],
    weights: &[f64],
    benefit: &[bool],
    honor_kinds: bool,
    squared: bool,
) -> Option<Naive> {
    let n = scores.len();
    let m = weights.len();

    let mut weighted = vec![vec![0.0; m]; n];
    for j in 0..m {
        let mut sum_sq = 0.0;
        for i in 0..n {
            sum_sq += scores[i][j] * scores[i][j];
        }
        let denom = sum_sq.sqrt();
        for i in 0..n {
            weighted[i][j] = scores[i][j] / denom * weights[j];
        }
    }

    let mut pis = vec![0.0; m];
    let mut nis = vec![0.0; m];
    for j in 0..m {
        let mut hi = weighted[0][j];
        let mut lo = weighted[0][j];
        for i in 1..n {
            if weighted[i][j] > hi {
                hi = weighted[i][j];
            }
            if weighted[i][j] < lo {
                lo = weighted[i][j];
            }
        }
        if !honor_kinds || benefit[j] {
            pis[j] = hi;
            nis[j] = lo;
        } else {
            pis[j] = lo;
            nis[j] = hi;
        }
    }

    let mut s_plus = vec![0.0; n];
    let mut s_minus = vec![0.0; n];
    for i in 0..n {
        let mut a = 0.0;
        let mut b = 0.0;
        for j in 0..m {
            a += (weighted[i][j] - pis[j]).powi(2);
            b += (weighted[i][j] - nis[j]).powi(2);
        }
        if squared {
            s_plus[i] = a;
            s_minus[i] = b;
        } else {
            s_plus[i] = a.sqrt();
            s_minus[i] = b.sqrt();
        }
    }

    let mut closeness = vec![0.0; n];
    for i in 0..n {
        let total = s_plus[i] + s_minus[i];
        if total == 0.0 {
            return None;
        }
        closeness[i] = s_minus[i] / total;
    }

    // Selection-style ranking: count strictly better alternatives, plus
    // equal ones earlier in input order.
    let mut ranks = vec![0; n];
    for i in 0..n {
        let mut r = 1;
        for k in 0..n {
            if closeness[k] > closeness[i] || (closeness[k] == closeness[i] && k < i) {
                r += 1;
            }
        }
        ranks[i] = r;
    }

    Some(Naive {
        weighted,
        pis,
        nis,
        s_plus,
        s_minus,
        closeness,
        ranks,
    })
}

/// The published case-study decision matrix and weights.
pub const PAPER_SCORES: [[f64; 4]; 6] = [
    [7.0, 6.0, 7.0, 7.0],
    [8.0, 8.0, 7.0, 6.0],
    [7.0, 6.0, 6.0, 6.0],
    [8.0, 7.0, 8.0, 6.0],
    [6.0, 6.0, 6.0, 6.0],
    [7.0, 8.0, 6.0, 6.0],
];
pub const PAPER_WEIGHTS: [f64; 4] = [0.5, 0.1, 0.3, 0.1];
pub const PAPER_BENEFIT: [bool; 4] = [true, true, true, false];

pub fn paper_scores() -> Vec<Vec<f64>> {
    PAPER_SCORES.iter().map(|r| r.to_vec()).collect()
}
