use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{self, IntMatrix};

/// Which lattice between the root and weight lattices the datum lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeKind {
    /// Basis of fundamental weights.
    #[serde(rename = "sc")]
    SimplyConnected,
    /// Basis of simple roots.
    #[serde(rename = "ad")]
    Adjoint,
    Custom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DynkinFamily {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DynkinType {
    pub family: DynkinFamily,
    pub rank: usize,
}

impl DynkinType {
    pub fn parse(label: &str) -> Result<DynkinType> {
        let bad = || Error::validation(format!("unknown Dynkin label {label:?}"));
        let mut chars = label.trim().chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => DynkinFamily::A,
            Some('B') => DynkinFamily::B,
            Some('C') => DynkinFamily::C,
            Some('D') => DynkinFamily::D,
            Some('E') => DynkinFamily::E,
            Some('F') => DynkinFamily::F,
            Some('G') => DynkinFamily::G,
            _ => return Err(bad()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        let ok = match family {
            DynkinFamily::A => rank >= 1,
            DynkinFamily::B | DynkinFamily::C => rank >= 2,
            DynkinFamily::D => rank >= 4,
            DynkinFamily::E => (6..=8).contains(&rank),
            DynkinFamily::F => rank == 4,
            DynkinFamily::G => rank == 2,
        };
        if !ok {
            return Err(Error::validation(format!("invalid rank in Dynkin label {label:?}")));
        }
        Ok(DynkinType { family, rank })
    }

    /// Cartan matrix with `C[i][j] = <alpha_j^vee, alpha_i>`, Bourbaki
    /// numbering (B_n: alpha_n short; C_n: alpha_n long; G2: alpha_1 short).
    pub fn cartan_matrix(&self) -> IntMatrix {
        let n = self.rank;
        let mut c = lattice::identity(n);
        for row in c.iter_mut() {
            for x in row.iter_mut() {
                *x *= 2;
            }
        }
        let mut bond = |i: usize, j: usize| {
            c[i][j] = -1;
            c[j][i] = -1;
        };
        match self.family {
            DynkinFamily::A | DynkinFamily::B | DynkinFamily::C | DynkinFamily::F => {
                for i in 0..n - 1 {
                    bond(i, i + 1);
                }
            }
            DynkinFamily::D => {
                for i in 0..n - 2 {
                    bond(i, i + 1);
                }
                bond(n - 3, n - 1);
            }
            DynkinFamily::E => {
                bond(0, 2);
                bond(1, 3);
                for i in 2..n - 1 {
                    bond(i, i + 1);
                }
            }
            DynkinFamily::G => bond(0, 1),
        }
        // long root evaluated on a short coroot gives the bond multiplicity
        match self.family {
            DynkinFamily::B => c[n - 2][n - 1] = -2,
            DynkinFamily::C => c[n - 1][n - 2] = -2,
            DynkinFamily::F => c[1][2] = -2,
            DynkinFamily::G => c[1][0] = -3,
            _ => {}
        }
        c
    }

    /// Primes dividing the torsion index of the simply connected group of
    /// this type.
    pub fn torsion_primes(&self) -> Vec<u64> {
        match self.family {
            DynkinFamily::A | DynkinFamily::C => vec![],
            // B2 = C2 (Spin5 = Sp4)
            DynkinFamily::B if self.rank == 2 => vec![],
            DynkinFamily::B | DynkinFamily::D | DynkinFamily::G => vec![2],
            DynkinFamily::F => vec![2, 3],
            DynkinFamily::E if self.rank == 8 => vec![2, 3, 5],
            DynkinFamily::E => vec![2, 3],
        }
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

/// A root in the datum: its lattice vector and its coordinates in the basis
/// of simple roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub vector: Vec<i64>,
    pub coords: Vec<i64>,
    pub positive: bool,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.coords.iter().sum()
    }
}

/// Semisimple root datum of finite type on a lattice `Z^n` with a fixed
/// basis.
///
/// Roots are indexed with the positive roots first (sorted by height, then by
/// descending simple-root coordinates, so `alpha_i` has index `i`), followed by
/// their negatives in the same order.
#[derive(Clone, Debug)]
pub struct RootDatum {
    rank: usize,
    dynkin: Option<DynkinType>,
    kind: LatticeKind,
    simple_roots: Vec<Vec<i64>>,
    simple_coroots: Vec<Vec<i64>>,
    cartan: IntMatrix,
    roots: Vec<Root>,
    lookup: HashMap<Vec<i64>, usize>,
}

const MAX_ROOTS: usize = 1000;

impl RootDatum {
    pub fn from_dynkin(label: &str, kind: LatticeKind) -> Result<RootDatum> {
        let ty = DynkinType::parse(label)?;
        let c = ty.cartan_matrix();
        let n = ty.rank;
        let (roots, coroots) = match kind {
            LatticeKind::SimplyConnected => (c.clone(), lattice::identity(n)),
            LatticeKind::Adjoint => (lattice::identity(n), lattice::transpose(&c)),
            LatticeKind::Custom => {
                return Err(Error::usage("a Dynkin label needs lattice 'sc' or 'ad'"))
            }
        };
        let mut rd = RootDatum::build(roots, coroots, kind)?;
        rd.dynkin = Some(ty);
        Ok(rd)
    }

    /// Root datum from explicit simple roots (lattice vectors) and simple
    /// coroots (integer covectors).
    pub fn from_matrices(simple_roots: IntMatrix, simple_coroots: IntMatrix) -> Result<RootDatum> {
        RootDatum::build(simple_roots, simple_coroots, LatticeKind::Custom)
    }

    fn build(simple_roots: IntMatrix, simple_coroots: IntMatrix, kind: LatticeKind) -> Result<RootDatum> {
        let n = simple_roots.len();
        if n == 0 {
            return Err(Error::validation("root datum must have positive rank"));
        }
        if simple_coroots.len() != n
            || simple_roots.iter().chain(&simple_coroots).any(|v| v.len() != n)
        {
            return Err(Error::validation(format!(
                "rank mismatch: expected {n} simple roots and coroots of length {n}"
            )));
        }
        if lattice::determinant(&simple_roots) == 0.into() {
            return Err(Error::validation("simple roots are linearly dependent"));
        }
        let cartan: IntMatrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        simple_coroots[j]
                            .iter()
                            .zip(&simple_roots[i])
                            .map(|(a, b)| a * b)
                            .sum()
                    })
                    .collect()
            })
            .collect();
        for i in 0..n {
            if cartan[i][i] != 2 {
                return Err(Error::validation(format!(
                    "coroot {} does not pair to 2 with its root",
                    i + 1
                )));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                let (a, b) = (cartan[i][j], cartan[j][i]);
                if a > 0 || (a == 0) != (b == 0) || a * b > 3 {
                    return Err(Error::validation(format!(
                        "not a Cartan matrix: entries ({},{}) = {a}, ({},{}) = {b}",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        let positive = positive_root_coords(&cartan)?;
        let mut pos: Vec<Vec<i64>> = positive;
        pos.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let to_vector = |coords: &[i64]| -> Vec<i64> {
            (0..n)
                .map(|k| coords.iter().zip(&simple_roots).map(|(c, r)| c * r[k]).sum())
                .collect()
        };
        let mut roots = Vec::with_capacity(2 * pos.len());
        for c in &pos {
            roots.push(Root { vector: to_vector(c), coords: c.clone(), positive: true });
        }
        for c in &pos {
            let neg: Vec<i64> = c.iter().map(|x| -x).collect();
            roots.push(Root { vector: to_vector(&neg), coords: neg, positive: false });
        }
        let mut lookup = HashMap::new();
        for (i, r) in roots.iter().enumerate() {
            if lookup.insert(r.vector.clone(), i).is_some() {
                return Err(Error::validation("two roots share a lattice vector"));
            }
        }
        for r in &roots {
            let doubled: Vec<i64> = r.vector.iter().map(|x| 2 * x).collect();
            if lookup.contains_key(&doubled) {
                return Err(Error::validation("a root is twice another root"));
            }
        }
        Ok(RootDatum {
            rank: n,
            dynkin: None,
            kind,
            simple_roots,
            simple_coroots,
            cartan,
            roots,
            lookup,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dynkin(&self) -> Option<DynkinType> {
        self.dynkin
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    pub fn label(&self) -> String {
        match (self.dynkin, self.kind) {
            (Some(t), LatticeKind::SimplyConnected) => format!("{t}^sc"),
            (Some(t), LatticeKind::Adjoint) => format!("{t}^ad"),
            _ => format!("custom rank {}", self.rank),
        }
    }

    pub fn cartan(&self) -> &IntMatrix {
        &self.cartan
    }

    pub fn simple_root(&self, i: usize) -> &[i64] {
        &self.simple_roots[i]
    }

    pub fn simple_coroot(&self, i: usize) -> &[i64] {
        &self.simple_coroots[i]
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn root(&self, index: usize) -> &Root {
        &self.roots[index]
    }

    pub fn num_positive(&self) -> usize {
        self.roots.len() / 2
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = usize> {
        0..self.num_positive()
    }

    pub fn negative_roots(&self) -> impl Iterator<Item = usize> {
        self.num_positive()..self.roots.len()
    }

    pub fn negate(&self, index: usize) -> usize {
        let p = self.num_positive();
        if index < p {
            index + p
        } else {
            index - p
        }
    }

    /// Index of the root with the given lattice vector.
    pub fn root_index(&self, vector: &[i64]) -> Option<usize> {
        self.lookup.get(vector).copied()
    }

    /// Simple reflection `s_i(lambda) = lambda - <alpha_i^vee, lambda> alpha_i`.
    pub fn reflect(&self, i: usize, lambda: &[i64]) -> Vec<i64> {
        let pairing: i64 = self.simple_coroots[i].iter().zip(lambda).map(|(a, b)| a * b).sum();
        lambda
            .iter()
            .zip(&self.simple_roots[i])
            .map(|(l, a)| l - pairing * a)
            .collect()
    }

    /// Matrix of the simple reflection `s_i` acting on column vectors.
    pub fn reflection_matrix(&self, i: usize) -> IntMatrix {
        let n = self.rank;
        (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| i64::from(r == c) - self.simple_roots[i][r] * self.simple_coroots[i][c])
                    .collect()
            })
            .collect()
    }

    /// Largest integer dividing the root's lattice vector.
    pub fn content(&self, index: usize) -> i64 {
        lattice::gcd_slice(&self.roots[index].vector)
    }

    /// Order of the quotient of the lattice by the root lattice.
    pub fn root_lattice_index(&self) -> i64 {
        use num_traits::{Signed, ToPrimitive};
        lattice::determinant(&self.simple_roots).abs().to_i64().unwrap_or(i64::MAX)
    }

    /// Order of the weight lattice modulo the root lattice.
    pub fn fundamental_group_order(&self) -> i64 {
        use num_traits::{Signed, ToPrimitive};
        lattice::determinant(&self.cartan).abs().to_i64().unwrap_or(i64::MAX)
    }
}

/// Positive roots in simple-root coordinates, generated by closing the simple
/// roots under simple reflections. Fails for Cartan matrices of infinite type.
fn positive_root_coords(cartan: &IntMatrix) -> Result<Vec<Vec<i64>>> {
    let n = cartan.len();
    let mut seen: std::collections::HashSet<Vec<i64>> = std::collections::HashSet::new();
    let mut queue: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|k| i64::from(k == i)).collect())
        .collect();
    for q in &queue {
        seen.insert(q.clone());
    }
    let mut out = Vec::new();
    while let Some(beta) = queue.pop() {
        out.push(beta.clone());
        for j in 0..n {
            let pairing: i64 = (0..n).map(|i| beta[i] * cartan[i][j]).sum();
            let mut image = beta.clone();
            image[j] -= pairing;
            if image.iter().all(|&x| x <= 0) {
                continue;
            }
            if image.iter().any(|&x| x < 0) {
                return Err(Error::validation("Cartan matrix is not of finite type"));
            }
            if seen.insert(image.clone()) {
                if seen.len() > MAX_ROOTS {
                    return Err(Error::validation("Cartan matrix is not of finite type"));
                }
                queue.push(image);
            }
        }
    }
    Ok(out)
}
