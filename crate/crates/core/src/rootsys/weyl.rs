use std::collections::{HashMap, VecDeque};

use num_traits::ToPrimitive;

use super::{rat, RootSystem};
use crate::error::{Error, Result};

/// Closure is abandoned past this many elements.
pub const WEYL_GROUP_BOUND: usize = 100_000;

/// One Weyl group element.
///
/// `coords` acts on simple-root coordinates (integer entries); `euclid` is
/// the same map in the orthonormal coordinates of the embedding.
#[derive(Debug, Clone)]
pub struct WeylElement {
    coords: Vec<Vec<i64>>,
    euclid: Vec<Vec<f64>>,
    sign: i8,
}

impl WeylElement {
    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn coord_matrix(&self) -> &[Vec<i64>] {
        &self.coords
    }

    pub fn euclid_matrix(&self) -> &[Vec<f64>] {
        &self.euclid
    }

    pub fn is_identity(&self) -> bool {
        self.coords
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, &v)| v == i64::from(i == j)))
    }

    pub fn act_coords(&self, y: &[i64]) -> Vec<i64> {
        self.coords.iter().map(|row| row.iter().zip(y).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn act_euclid(&self, x: &[f64]) -> Vec<f64> {
        self.euclid.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }
}

/// The finite reflection group generated by the simple reflections.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    elements: Vec<WeylElement>,
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    /// Simple reflections come first, after the identity.
    pub fn simple_reflection(&self, i: usize) -> &WeylElement {
        &self.elements[i + 1]
    }

    pub fn iter(&self) -> impl Iterator<Item = &WeylElement> {
        self.elements.iter()
    }
}

fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

/// Enumerates `W` by breadth-first closure of the simple reflections.
pub fn weyl_group(rs: &RootSystem) -> Result<WeylGroup> {
    let n = rs.rank();
    let gram = rs.gram();
    // s_j(y) = y − (2 (B y)_j / B_jj) e_j
    let generators: Vec<Vec<Vec<i64>>> = (0..n)
        .map(|j| {
            let mut m: Vec<Vec<i64>> =
                (0..n).map(|i| (0..n).map(|k| i64::from(i == k)).collect()).collect();
            for (k, g) in gram[j].iter().enumerate() {
                let c = (rat(2, 1) * g / &gram[j][j]).to_integer().to_i64().unwrap();
                m[j][k] -= c;
            }
            m
        })
        .collect();

    let identity: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|k| i64::from(i == k)).collect()).collect();
    let mut index: HashMap<Vec<Vec<i64>>, i8> = HashMap::new();
    let mut order: Vec<(Vec<Vec<i64>>, i8)> = Vec::new();
    let mut queue = VecDeque::new();
    index.insert(identity.clone(), 1);
    order.push((identity.clone(), 1));
    queue.push_back((identity, 1i8));
    while let Some((m, sign)) = queue.pop_front() {
        for g in &generators {
            let next = matmul(g, &m);
            if !index.contains_key(&next) {
                if index.len() >= WEYL_GROUP_BOUND {
                    return Err(Error::WeylGroupTooLarge { bound: WEYL_GROUP_BOUND });
                }
                index.insert(next.clone(), -sign);
                order.push((next.clone(), -sign));
                queue.push_back((next, -sign));
            }
        }
    }

    // Euclidean form: x = Lᵀ y, so w_e = Lᵀ M L⁻ᵀ.
    let l = rs.simple_roots_euclid();
    let lt_inv = invert_f64(&transpose(l));
    let elements = order
        .into_iter()
        .map(|(coords, sign)| {
            let mf: Vec<Vec<f64>> =
                coords.iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect();
            let euclid = matmul_f64(&matmul_f64(&transpose(l), &mf), &lt_inv);
            WeylElement { coords, euclid, sign }
        })
        .collect();
    Ok(WeylGroup { elements })
}

fn transpose(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i]).collect()).collect()
}

fn matmul_f64(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn invert_f64(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .max_by(|&x, &y| m[x][c].abs().partial_cmp(&m[y][c].abs()).unwrap())
            .unwrap();
        m.swap(c, p);
        let piv = m[c][c];
        for v in m[c].iter_mut() {
            *v /= piv;
        }
        for r in 0..n {
            if r != c {
                let f = m[r][c];
                for k in 0..2 * n {
                    m[r][k] -= f * m[c][k];
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}
