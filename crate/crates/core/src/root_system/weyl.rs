use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::lattice::{self, IntMatrix};

use super::datum::RootDatum;

/// Default upper bound on the number of enumerated Weyl group elements.
pub const DEFAULT_MAX_WEYL: usize = 2000;

/// Handle to an element of a [`WeylGroup`]; index 0 is the identity.
///
/// Indices follow the order (length, canonical word), so comparing handles
/// compares elements in that order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement(pub(crate) u32);

impl WeylElement {
    pub const IDENTITY: WeylElement = WeylElement(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug)]
struct ElementData {
    word: Vec<usize>,
    matrix: IntMatrix,
}

/// The Weyl group of a root datum, fully enumerated with multiplication
/// tables and the action on roots.
#[derive(Debug)]
pub struct WeylGroup {
    datum: Arc<RootDatum>,
    elements: Vec<ElementData>,
    lookup: HashMap<IntMatrix, u32>,
    right: Vec<Vec<u32>>,
    left: Vec<Vec<u32>>,
    inverse: Vec<u32>,
    root_action: Vec<Vec<u32>>,
    reflections: Vec<u32>,
    longest: u32,
    below: Vec<OnceLock<Vec<bool>>>,
}

impl WeylGroup {
    pub fn new(datum: Arc<RootDatum>, bound: usize) -> Result<WeylGroup> {
        let n = datum.rank();
        let gens: Vec<IntMatrix> = (0..n).map(|i| datum.reflection_matrix(i)).collect();
        // breadth-first closure under right multiplication
        let mut matrices = vec![lattice::identity(n)];
        let mut lengths = vec![0usize];
        let mut index: HashMap<IntMatrix, usize> = HashMap::new();
        index.insert(matrices[0].clone(), 0);
        let mut head = 0;
        while head < matrices.len() {
            for g in &gens {
                let m = lattice::mat_mul(&matrices[head], g);
                if !index.contains_key(&m) {
                    if matrices.len() >= bound {
                        return Err(Error::resource(format!(
                            "Weyl group of {} has more than {bound} elements",
                            datum.label()
                        )));
                    }
                    index.insert(m.clone(), matrices.len());
                    matrices.push(m);
                    lengths.push(lengths[head] + 1);
                }
            }
            head += 1;
        }
        let size = matrices.len();
        let gen_left = |w: usize, i: usize| index[&lattice::mat_mul(&gens[i], &matrices[w])];
        // lexicographically smallest reduced word: smallest left descent first
        let mut words: Vec<Vec<usize>> = vec![Vec::new(); size];
        let mut by_length: Vec<usize> = (0..size).collect();
        by_length.sort_by_key(|&w| lengths[w]);
        for &w in &by_length {
            if lengths[w] == 0 {
                continue;
            }
            let (i, v) = (0..n)
                .map(|i| (i, gen_left(w, i)))
                .find(|&(_, v)| lengths[v] < lengths[w])
                .expect("nonidentity element has a left descent");
            let mut word = vec![i];
            word.extend_from_slice(&words[v]);
            words[w] = word;
        }
        let mut order: Vec<usize> = (0..size).collect();
        order.sort_by(|&a, &b| lengths[a].cmp(&lengths[b]).then_with(|| words[a].cmp(&words[b])));
        let elements: Vec<ElementData> = order
            .iter()
            .map(|&w| ElementData { word: words[w].clone(), matrix: matrices[w].clone() })
            .collect();
        let lookup: HashMap<IntMatrix, u32> = elements
            .iter()
            .enumerate()
            .map(|(k, e)| (e.matrix.clone(), k as u32))
            .collect();
        let find = |m: &IntMatrix| lookup[m];
        let right: Vec<Vec<u32>> = elements
            .iter()
            .map(|e| gens.iter().map(|g| find(&lattice::mat_mul(&e.matrix, g))).collect())
            .collect();
        let left: Vec<Vec<u32>> = elements
            .iter()
            .map(|e| gens.iter().map(|g| find(&lattice::mat_mul(g, &e.matrix))).collect())
            .collect();
        let mut inverse = vec![0u32; size];
        for (w, e) in elements.iter().enumerate() {
            let mut v = 0u32;
            for &i in e.word.iter().rev() {
                v = right[v as usize][i];
            }
            inverse[w] = v;
        }
        let root_action: Vec<Vec<u32>> = elements
            .iter()
            .map(|e| {
                datum
                    .roots()
                    .iter()
                    .map(|r| {
                        let image = lattice::mat_vec(&e.matrix, &r.vector);
                        datum.root_index(&image).expect("Weyl group permutes the roots") as u32
                    })
                    .collect()
            })
            .collect();
        // s_beta = w s_i w^-1 for any w with w(alpha_i) = beta
        let mut reflections = vec![u32::MAX; datum.roots().len()];
        for (w, act) in root_action.iter().enumerate() {
            for i in 0..n {
                let beta = act[i] as usize;
                if reflections[beta] == u32::MAX {
                    let ws = right[w][i] as usize;
                    let r = find(&lattice::mat_mul(
                        &elements[ws].matrix,
                        &elements[inverse[w] as usize].matrix,
                    ));
                    reflections[beta] = r;
                    reflections[datum.negate(beta)] = r;
                }
            }
        }
        let longest = (size - 1) as u32;
        Ok(WeylGroup {
            datum,
            below: (0..size).map(|_| OnceLock::new()).collect(),
            elements,
            lookup,
            right,
            left,
            inverse,
            root_action,
            reflections,
            longest,
        })
    }

    pub fn datum(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> WeylElement {
        WeylElement::IDENTITY
    }

    pub fn longest(&self) -> WeylElement {
        WeylElement(self.longest)
    }

    pub fn elements(&self) -> impl DoubleEndedIterator<Item = WeylElement> + ExactSizeIterator {
        (0..self.elements.len() as u32).map(WeylElement)
    }

    pub fn element(&self, index: usize) -> WeylElement {
        assert!(index < self.elements.len());
        WeylElement(index as u32)
    }

    /// Canonical (lexicographically smallest) reduced word, 0-based letters.
    pub fn word(&self, w: WeylElement) -> &[usize] {
        &self.elements[w.index()].word
    }

    pub fn matrix(&self, w: WeylElement) -> &IntMatrix {
        &self.elements[w.index()].matrix
    }

    pub fn length(&self, w: WeylElement) -> usize {
        self.elements[w.index()].word.len()
    }

    pub fn simple(&self, i: usize) -> WeylElement {
        WeylElement(self.right[0][i])
    }

    pub fn mul_simple_right(&self, w: WeylElement, i: usize) -> WeylElement {
        WeylElement(self.right[w.index()][i])
    }

    pub fn mul_simple_left(&self, i: usize, w: WeylElement) -> WeylElement {
        WeylElement(self.left[w.index()][i])
    }

    pub fn mul(&self, v: WeylElement, w: WeylElement) -> WeylElement {
        let mut u = v;
        for &i in self.word(w) {
            u = self.mul_simple_right(u, i);
        }
        u
    }

    pub fn inverse(&self, w: WeylElement) -> WeylElement {
        WeylElement(self.inverse[w.index()])
    }

    /// Element given by a word (not necessarily reduced).
    pub fn from_word(&self, word: &[usize]) -> Result<WeylElement> {
        let mut w = self.identity();
        for &i in word {
            if i >= self.rank() {
                return Err(Error::usage(format!(
                    "letter {} out of range 1..={}",
                    i + 1,
                    self.rank()
                )));
            }
            w = self.mul_simple_right(w, i);
        }
        Ok(w)
    }

    pub fn is_reduced(&self, word: &[usize]) -> Result<bool> {
        Ok(self.length(self.from_word(word)?) == word.len())
    }

    /// Element with the given action matrix.
    pub fn from_matrix(&self, m: &IntMatrix) -> Option<WeylElement> {
        self.lookup.get(m).map(|&k| WeylElement(k))
    }

    pub fn act(&self, w: WeylElement, lambda: &[i64]) -> Vec<i64> {
        lattice::mat_vec(self.matrix(w), lambda)
    }

    /// Index of `w(beta)` for a root index `beta`.
    pub fn act_root(&self, w: WeylElement, beta: usize) -> usize {
        self.root_action[w.index()][beta] as usize
    }

    /// The reflection in the root with index `beta`.
    pub fn reflection(&self, beta: usize) -> WeylElement {
        WeylElement(self.reflections[beta])
    }

    /// Positive roots sent to negative roots by `w`.
    pub fn inversions(&self, w: WeylElement) -> Vec<usize> {
        self.datum
            .positive_roots()
            .filter(|&b| !self.datum.root(self.act_root(w, b)).positive)
            .collect()
    }

    /// All reduced words of `w`, in lexicographic order.
    pub fn reduced_words(&self, w: WeylElement) -> Vec<Vec<usize>> {
        if self.length(w) == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for i in 0..self.rank() {
            let v = self.mul_simple_left(i, w);
            if self.length(v) < self.length(w) {
                for rest in self.reduced_words(v) {
                    let mut word = vec![i];
                    word.extend(rest);
                    out.push(word);
                }
            }
        }
        out
    }

    /// Bruhat order by the subword criterion on the canonical word of `w`.
    pub fn bruhat_leq(&self, v: WeylElement, w: WeylElement) -> bool {
        self.below(w)[v.index()]
    }

    /// Indicator vector of the lower Bruhat interval `[e, w]`.
    pub fn below(&self, w: WeylElement) -> &[bool] {
        self.below[w.index()].get_or_init(|| {
            let mut reach = vec![false; self.order()];
            reach[0] = true;
            let mut current = vec![WeylElement::IDENTITY];
            for &i in self.word(w) {
                let mut next = current.clone();
                for &u in &current {
                    let us = self.mul_simple_right(u, i);
                    if !reach[us.index()] {
                        reach[us.index()] = true;
                        next.push(us);
                    }
                }
                current = next;
            }
            reach
        })
    }

    /// Human-readable name such as `s1s2`, or `e`.
    pub fn name(&self, w: WeylElement) -> String {
        if self.length(w) == 0 {
            return "e".into();
        }
        self.word(w).iter().map(|i| format!("s{}", i + 1)).collect()
    }
}
