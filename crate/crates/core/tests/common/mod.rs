#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use chambers::building::{Building, Chamber};
use chambers::coxeter::CoxeterSystem;

/// Generalized Cartan matrix with `a_ij a_ji = 4 cos²(π/m_ij)` (and 4 for
/// `m = ∞`). Its Weyl group action on the root lattice is faithful.
fn cartan(sys: &CoxeterSystem) -> Vec<Vec<i64>> {
    let n = sys.rank();
    let entry = |i: usize, j: usize| -> i64 {
        if i == j {
            return 2;
        }
        let (lo, hi) = match sys.matrix().raw(i.min(j), i.max(j)) {
            2 => (0, 0),
            3 => (-1, -1),
            4 => (-1, -2),
            6 => (-1, -3),
            0 => (-2, -2),
            m => panic!("no integral Cartan entry for m = {m}"),
        };
        if i < j {
            lo
        } else {
            hi
        }
    };
    let a: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| entry(i, j)).collect())
        .collect();
    a
}

/// Matrix of a word acting on the root lattice, `s_i(α_j) = α_j − a_ij α_i`.
pub fn word_matrix(a: &[Vec<i64>], word: &[usize]) -> Vec<i64> {
    let n = a.len();
    let mut m: Vec<i64> = (0..n * n).map(|k| i64::from(k / n == k % n)).collect();
    for &s in word {
        // m ← m · s_s: column j of s_s is α_j − a_sj α_s.
        let mut next = m.clone();
        for r in 0..n {
            for j in 0..n {
                next[r * n + j] = m[r * n + j] - a[s][j] * m[r * n + s];
            }
        }
        m = next;
    }
    m
}

pub fn words(rank: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for s in 0..rank {
                let mut v: Vec<usize> = w.clone();
                v.push(s);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Checks `normal_form` against the matrix oracle on all words up to
/// `max_len`: equal normal forms iff equal matrices, normal-form length is
/// the least length of a word for that matrix, and the normal form
/// evaluates to the same matrix.
pub fn check_word_problem(sys: &CoxeterSystem, max_len: usize) -> Result<usize, String> {
    let a = cartan(sys);
    let mut by_matrix: HashMap<Vec<i64>, (Vec<u8>, usize)> = HashMap::new();
    let mut by_form: HashMap<Vec<u8>, Vec<i64>> = HashMap::new();
    let all = words(sys.rank(), max_len);
    for w in &all {
        let m = word_matrix(&a, w);
        let nf = sys.normal_form(w).map_err(|e| e.to_string())?;
        let form = nf.word().to_vec();
        let form_word: Vec<usize> = form.iter().map(|&s| s as usize).collect();
        if word_matrix(&a, &form_word) != m {
            return Err(format!(
                "{w:?}: normal form {form:?} is a different element"
            ));
        }
        let (seen, shortest) = by_matrix
            .entry(m.clone())
            .or_insert((form.clone(), w.len()));
        if *seen != form {
            return Err(format!(
                "{w:?}: normal form {form:?}, same element had {seen:?}"
            ));
        }
        if form.len() != *shortest {
            return Err(format!(
                "{w:?}: normal form length {} but a word of length {shortest} exists",
                form.len()
            ));
        }
        if let Some(prev) = by_form.insert(form.clone(), m.clone()) {
            if prev != m {
                return Err(format!(
                    "{w:?}: normal form {form:?} shared by two elements"
                ));
            }
        }
    }
    Ok(all.len())
}

/// BFS gallery distances from `c` over the panel adjacency.
pub fn bfs(b: &Building, c: Chamber) -> Vec<usize> {
    let mut dist = vec![usize::MAX; b.chamber_count()];
    dist[c as usize] = 0;
    let mut queue = VecDeque::from([c]);
    while let Some(d) = queue.pop_front() {
        for e in b.neighbours(d) {
            if dist[e as usize] == usize::MAX {
                dist[e as usize] = dist[d as usize] + 1;
                queue.push_back(e);
            }
        }
    }
    dist
}

/// In a spherical building each apartment is the convex hull of any
/// opposite pair in it and holds exactly one opposite of each chamber, so
/// #apartments = #(ordered opposite pairs) / |W|.
pub fn apartment_count_oracle(b: &Building, diameter: usize) -> usize {
    let pairs: usize = b
        .chambers()
        .map(|c| bfs(b, c).iter().filter(|&&d| d == diameter).count())
        .sum();
    pairs / b.group().order()
}
