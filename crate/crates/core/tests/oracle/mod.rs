//! Independent Chevalley–Eilenberg oracle: matrices assembled by evaluating
//! alternating cochains on basis vectors, ranks by plain dense elimination.
//! Shares nothing with the library beyond the bracket.

use lieseq::LieAlgebraData;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for rest in subsets(n, k - 1) {
            if rest.first().map_or(true, |&r| r > first) {
                let mut s = vec![first];
                s.extend(rest);
                out.push(s);
            }
        }
    }
    out.sort();
    out
}

pub fn det(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut acc = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            m.swap(p, c);
            acc = -acc;
        }
        acc *= m[c][c].clone();
        for r in c + 1..n {
            let f = m[r][c].clone() / m[c][c].clone();
            for j in c..n {
                let t = m[c][j].clone() * f.clone();
                m[r][j] -= t;
            }
        }
    }
    acc
}

/// `e^I(y_1, …, y_q) = det[(y_a)_{I_b}]`.
fn eval_basis_form(i: &[usize], args: &[Vec<Q>]) -> Q {
    det(args.iter().map(|y| i.iter().map(|&b| y[b].clone()).collect()).collect())
}

fn unit(n: usize, i: usize) -> Vec<Q> {
    (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()
}

/// `(dω)(x_0..x_q) = Σ_{i<j} (-1)^{i+j} ω([x_i,x_j], x_0..x̂_i..x̂_j..x_q)`.
pub fn oracle_matrix(g: &LieAlgebraData, q: usize) -> Vec<Vec<Q>> {
    let n = g.dim();
    let src = subsets(n, q);
    let dst = subsets(n, q + 1);
    let mut m = vec![vec![Q::zero(); src.len()]; dst.len()];
    for (row, j) in dst.iter().enumerate() {
        let xs: Vec<Vec<Q>> = j.iter().map(|&a| unit(n, a)).collect();
        for (col, i) in src.iter().enumerate() {
            let mut acc = Q::zero();
            for a in 0..=q {
                for b in a + 1..=q {
                    let mut args = vec![g.bracket_of(&xs[a], &xs[b])];
                    args.extend(xs.iter().enumerate().filter(|(t, _)| *t != a && *t != b).map(|(_, x)| x.clone()));
                    let v = eval_basis_form(i, &args);
                    if (a + b) % 2 == 0 {
                        acc += v;
                    } else {
                        acc -= v;
                    }
                }
            }
            m[row][col] = acc;
        }
    }
    m
}

pub fn dense_rank(mut m: Vec<Vec<Q>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).max_by_key(|&i| if m[i][c].is_zero() { 0 } else { 1 }) else {
            break;
        };
        if m[p][c].is_zero() {
            continue;
        }
        m.swap(p, r);
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone() / m[r][c].clone();
                for j in 0..cols {
                    let t = m[r][j].clone() * f.clone();
                    m[i][j] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

pub fn oracle_betti(g: &LieAlgebraData) -> Vec<usize> {
    let n = g.dim();
    let ranks: Vec<usize> = (0..=n).map(|q| if q < n { dense_rank(oracle_matrix(g, q)) } else { 0 }).collect();
    (0..=n)
        .map(|q| {
            let dim = subsets(n, q).len();
            dim - ranks[q] - if q > 0 { ranks[q - 1] } else { 0 }
        })
        .collect()
}

