//! Combinatorial quasitoric pairs (P, Lambda) and their fixed-point data.
//!
//! A pair is a simple n-polytope given combinatorially (inward-pointing
//! facet normals plus vertices as n-element facet-index sets) together with
//! an integer n x m characteristic matrix Lambda whose vertex submatrices
//! Lambda_v have determinant +-1. Each vertex yields one isolated fixed
//! point with
//!
//! - weights: the rows of Lambda_v^{-1} (columns assembled in ascending
//!   facet order),
//! - sign: sign(det Lambda_v * det(a_{j_1}, ..., a_{j_n})), normals in the
//!   same ascending order.
//!
//! The sign is invariant under any common permutation of the facet order,
//! so the ascending convention is a pure normalisation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Simple polytope combinatorics: dimension, inward-pointing facet normals,
/// and vertices as ascending facet-index sets (0-based internally).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplePolytope {
    pub dim: usize,
    pub facet_normals: Vec<Vec<i64>>,
    pub vertices: Vec<Vec<usize>>,
}

impl SimplePolytope {
    pub fn facet_count(&self) -> usize {
        self.facet_normals.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
}

/// The n-simplex: facets e_1, ..., e_n and -(1, ..., 1); every n-subset of
/// facets is a vertex.
pub fn simplex(n: usize) -> SimplePolytope {
    assert!(n >= 1, "simplex dimension must be at least 1");
    let mut facet_normals = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = 1;
        facet_normals.push(e);
    }
    facet_normals.push(vec![-1i64; n]);
    // n-subsets of {0..n} in lexicographic order: omit n, n-1, ..., 0
    let vertices = (0..=n)
        .rev()
        .map(|omit| (0..=n).filter(|&j| j != omit).collect())
        .collect();
    SimplePolytope {
        dim: n,
        facet_normals,
        vertices,
    }
}

/// The 0-polytope (one vertex, no facets); the unit for `product`.
pub fn point() -> SimplePolytope {
    SimplePolytope {
        dim: 0,
        facet_normals: Vec::new(),
        vertices: vec![Vec::new()],
    }
}

/// Product polytope: p's facets first (normals padded with zeros on the
/// right), then q's (padded on the left); vertices are unions of shifted
/// index sets, enumerated p-vertex outer.
pub fn product(p: &SimplePolytope, q: &SimplePolytope) -> SimplePolytope {
    let dim = p.dim + q.dim;
    let mut facet_normals = Vec::with_capacity(p.facet_count() + q.facet_count());
    for a in &p.facet_normals {
        let mut v = a.clone();
        v.resize(dim, 0);
        facet_normals.push(v);
    }
    for b in &q.facet_normals {
        let mut v = vec![0i64; p.dim];
        v.extend_from_slice(b);
        facet_normals.push(v);
    }
    let shift = p.facet_count();
    let mut vertices = Vec::with_capacity(p.vertex_count() * q.vertex_count());
    for pv in &p.vertices {
        for qv in &q.vertices {
            let mut v = pv.clone();
            v.extend(qv.iter().map(|j| j + shift));
            v.sort_unstable();
            vertices.push(v);
        }
    }
    SimplePolytope {
        dim,
        facet_normals,
        vertices,
    }
}

/// Integer n x m characteristic matrix, rows indexed by the torus factors,
/// columns by facets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacteristicMatrix {
    rows: Vec<Vec<i64>>,
}

impl CharacteristicMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Self {
        CharacteristicMatrix { rows }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.rows[row][col]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// Square submatrix with the given columns, in the given order.
    pub fn submatrix(&self, cols: &[usize]) -> Vec<Vec<i64>> {
        self.rows
            .iter()
            .map(|r| cols.iter().map(|&c| r[c]).collect())
            .collect()
    }
}

/// Determinant by fraction-free (Bareiss) elimination; exact in i128.
pub fn det_i64(mat: &[Vec<i64>]) -> i128 {
    let n = mat.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = mat
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Inverse of a matrix with det = +-1, by exact adjugate division
/// (integrality is guaranteed by unimodularity).
pub fn unimodular_inverse(mat: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let n = mat.len();
    let det = det_i64(mat);
    if det != 1 && det != -1 {
        return Err(Error::ValidationFailed(format!(
            "matrix determinant {det} is not +-1"
        )));
    }
    let minor = |skip_r: usize, skip_c: usize| -> i128 {
        let sub: Vec<Vec<i64>> = (0..n)
            .filter(|&r| r != skip_r)
            .map(|r| (0..n).filter(|&c| c != skip_c).map(|c| mat[r][c]).collect())
            .collect();
        det_i64(&sub)
    };
    let mut inv = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let cof = if (i + j) % 2 == 0 {
                minor(i, j)
            } else {
                -minor(i, j)
            };
            // adj = cof^T; 1/det = det for det = +-1
            inv[j][i] = i64::try_from(cof * det).expect("unimodular inverse entry fits i64");
        }
    }
    Ok(inv)
}

/// A named quasitoric pair; validated on construction paths that build
/// fixed-point data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasitoricPair {
    pub name: String,
    pub polytope: SimplePolytope,
    pub lambda: CharacteristicMatrix,
}

/// One offending vertex in a validation report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexFailure {
    /// 1-based vertex index.
    pub vertex: usize,
    pub det: i64,
}

/// Structured result of `validate_pair`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    /// Shape problems (dimension mismatches, bad indices, unused facets).
    pub problems: Vec<String>,
    /// Vertices whose submatrix determinant is not +-1.
    pub det_failures: Vec<VertexFailure>,
}

/// Check shape consistency and the det Lambda_v = +-1 condition at every
/// vertex. Never panics on bad mathematical input.
pub fn validate_pair(pair: &QuasitoricPair) -> ValidationReport {
    let mut problems = Vec::new();
    let n = pair.polytope.dim;
    let m = pair.polytope.facet_count();
    if pair.lambda.n_rows() != n {
        problems.push(format!(
            "lambda has {} rows, polytope dimension is {n}",
            pair.lambda.n_rows()
        ));
    }
    if pair.lambda.rows().iter().any(|r| r.len() != m) {
        problems.push(format!("lambda rows must all have {m} columns"));
    }
    for (i, a) in pair.polytope.facet_normals.iter().enumerate() {
        if a.len() != n {
            problems.push(format!("facet normal {} has length {}", i + 1, a.len()));
        }
    }
    let mut used = vec![false; m];
    for (vi, v) in pair.polytope.vertices.iter().enumerate() {
        if v.len() != n {
            problems.push(format!(
                "vertex {} has {} facets, expected {n}",
                vi + 1,
                v.len()
            ));
            continue;
        }
        if v.windows(2).any(|w| w[0] >= w[1]) {
            problems.push(format!(
                "vertex {} facet set is not strictly ascending",
                vi + 1
            ));
        }
        for &j in v {
            if j >= m {
                problems.push(format!(
                    "vertex {} references facet {} > {m}",
                    vi + 1,
                    j + 1
                ));
            } else {
                used[j] = true;
            }
        }
    }
    for (j, u) in used.iter().enumerate() {
        if !u {
            problems.push(format!("facet {} appears in no vertex", j + 1));
        }
    }
    if !problems.is_empty() {
        return ValidationReport {
            ok: false,
            problems,
            det_failures: Vec::new(),
        };
    }
    let mut det_failures = Vec::new();
    for (vi, v) in pair.polytope.vertices.iter().enumerate() {
        let d = det_i64(&pair.lambda.submatrix(v));
        if d != 1 && d != -1 {
            det_failures.push(VertexFailure {
                vertex: vi + 1,
                det: d as i64,
            });
        }
    }
    ValidationReport {
        ok: det_failures.is_empty(),
        problems,
        det_failures,
    }
}

/// Fixed-point data at one vertex: sign and the weight vectors (rows of
/// Lambda_v^{-1}).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPointDatum {
    /// 0-based vertex index into the polytope's vertex list.
    pub vertex: usize,
    /// Ascending 0-based facet indices j_1 < ... < j_n.
    pub facets: Vec<usize>,
    pub det_lambda: i64,
    pub sign: i8,
    pub weights: Vec<Vec<i64>>,
}

/// Compute sign and weights for every vertex. Fails with a structured
/// validation error if the pair is not a valid quasitoric pair.
pub fn fixed_point_data(pair: &QuasitoricPair) -> Result<Vec<FixedPointDatum>> {
    let report = validate_pair(pair);
    if !report.ok {
        let mut msgs = report.problems;
        msgs.extend(
            report
                .det_failures
                .iter()
                .map(|f| format!("vertex {}: det = {}", f.vertex, f.det)),
        );
        return Err(Error::ValidationFailed(msgs.join("; ")));
    }
    let normals = &pair.polytope.facet_normals;
    let mut out = Vec::with_capacity(pair.polytope.vertex_count());
    for (vi, v) in pair.polytope.vertices.iter().enumerate() {
        let lambda_v = pair.lambda.submatrix(v);
        let det_lambda = det_i64(&lambda_v) as i64;
        let weights = unimodular_inverse(&lambda_v)?;
        // normals as columns, ascending facet order (same order as lambda_v)
        let n = pair.polytope.dim;
        let normal_mat: Vec<Vec<i64>> = (0..n)
            .map(|r| v.iter().map(|&j| normals[j][r]).collect())
            .collect();
        let det_normals = det_i64(&normal_mat);
        let sign = if (det_lambda as i128) * det_normals > 0 {
            1i8
        } else {
            -1i8
        };
        out.push(FixedPointDatum {
            vertex: vi,
            facets: v.clone(),
            det_lambda,
            sign,
            weights,
        });
    }
    Ok(out)
}

/// Result of the SU weight-sum check: do all fixed points share one weight
/// sum vector?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSumCheck {
    pub uniform: bool,
    /// The common sum when uniform, the first vertex's sum otherwise.
    pub sum: Vec<i64>,
    /// 0-based vertex index and sum of the first disagreeing vertex.
    pub counterexample: Option<(usize, Vec<i64>)>,
}

/// Sum the weights at each fixed point; for an SU-manifold they agree.
/// A necessary-condition guard, not a full SU check.
pub fn su_weight_sum_check(data: &[FixedPointDatum]) -> WeightSumCheck {
    assert!(
        !data.is_empty(),
        "weight-sum check needs at least one fixed point"
    );
    let sum_of = |d: &FixedPointDatum| -> Vec<i64> {
        let n = d.weights[0].len();
        let mut s = vec![0i64; n];
        for w in &d.weights {
            for (i, &x) in w.iter().enumerate() {
                s[i] += x;
            }
        }
        s
    };
    let first = sum_of(&data[0]);
    for d in &data[1..] {
        let s = sum_of(d);
        if s != first {
            return WeightSumCheck {
                uniform: false,
                sum: first,
                counterexample: Some((d.vertex, s)),
            };
        }
    }
    WeightSumCheck {
        uniform: true,
        sum: first,
        counterexample: None,
    }
}

/// One summand of the localisation formula: sign and the linear forms
/// `<w_i, x>` (each form is its integer coefficient vector).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalisationTerm {
    pub sign: i8,
    pub forms: Vec<Vec<i64>>,
}

/// Per fixed point: the sign and the n linear forms of its summand, in
/// weight-row order.
pub fn localisation_term_dump(data: &[FixedPointDatum]) -> Vec<LocalisationTerm> {
    data.iter()
        .map(|d| LocalisationTerm {
            sign: d.sign,
            forms: d.weights.clone(),
        })
        .collect()
}

/// Canonical rendering of a linear form in ascending variable order, e.g.
/// `x1+x2`, `-x1+x3`, `2x2-x5`, `0`.
pub fn render_linear_form(w: &[i64]) -> String {
    let mut out = String::new();
    for (i, &c) in w.iter().enumerate() {
        if c == 0 {
            continue;
        }
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else {
            out.push(if c < 0 { '-' } else { '+' });
        }
        let a = c.unsigned_abs();
        if a != 1 {
            out.push_str(&a.to_string());
        }
        out.push_str(&format!("x{}", i + 1));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for LocalisationTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let forms: Vec<String> = self.forms.iter().map(|w| render_linear_form(w)).collect();
        write!(
            f,
            "{} [{}]",
            if self.sign > 0 { "+" } else { "-" },
            forms.join(", ")
        )
    }
}

/// The 10-dimensional quasitoric SU-manifold over the product of a triangle
/// and a tetrahedron, with the 5 x 7 characteristic matrix below. Vertices
/// are listed in the order used by the fixed-point table this crate's golden
/// tests pin down.
pub fn l23_fixture() -> QuasitoricPair {
    let base = product(&simplex(2), &simplex(3));
    // 1-based facet sets in the fixed enumeration order of the 12 vertices
    let vertex_order_1based: [[usize; 5]; 12] = [
        [1, 2, 4, 5, 6],
        [2, 3, 4, 5, 6],
        [1, 3, 4, 5, 6],
        [1, 2, 5, 6, 7],
        [1, 3, 5, 6, 7],
        [2, 3, 5, 6, 7],
        [1, 2, 4, 6, 7],
        [1, 3, 4, 6, 7],
        [2, 3, 4, 6, 7],
        [1, 2, 4, 5, 7],
        [1, 3, 4, 5, 7],
        [2, 3, 4, 5, 7],
    ];
    let vertices: Vec<Vec<usize>> = vertex_order_1based
        .iter()
        .map(|v| v.iter().map(|j| j - 1).collect())
        .collect();
    debug_assert_eq!(
        {
            let mut a = base.vertices.clone();
            a.sort();
            a
        },
        {
            let mut b = vertices.clone();
            b.sort();
            b
        },
        "fixture vertex sets must agree with the product combinatorics"
    );
    let polytope = SimplePolytope {
        dim: base.dim,
        facet_normals: base.facet_normals,
        vertices,
    };
    let lambda = CharacteristicMatrix::new(vec![
        vec![1, 0, 1, 0, 0, 0, 0],
        vec![0, 1, -1, 0, 0, 0, 0],
        vec![0, 0, 1, 1, 0, 0, 1],
        vec![0, 0, 0, 0, 1, 0, -1],
        vec![0, 0, 0, 0, 0, 1, 1],
    ]);
    QuasitoricPair {
        name: "l23".to_string(),
        polytope,
        lambda,
    }
}

/// On-disk manifold document. Facet indices in `vertices` are 1-based to
/// match the usual a_1 ... a_m facet numbering.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ManifoldDoc {
    pub name: String,
    pub dim: usize,
    pub facet_normals: Vec<Vec<i64>>,
    pub vertices: Vec<Vec<usize>>,
    pub lambda: Vec<Vec<i64>>,
}

impl ManifoldDoc {
    pub fn from_pair(pair: &QuasitoricPair) -> Self {
        ManifoldDoc {
            name: pair.name.clone(),
            dim: pair.polytope.dim,
            facet_normals: pair.polytope.facet_normals.clone(),
            vertices: pair
                .polytope
                .vertices
                .iter()
                .map(|v| v.iter().map(|j| j + 1).collect())
                .collect(),
            lambda: pair.lambda.rows().to_vec(),
        }
    }

    pub fn to_pair(&self) -> Result<QuasitoricPair> {
        let mut vertices = Vec::with_capacity(self.vertices.len());
        for (vi, v) in self.vertices.iter().enumerate() {
            let mut w = Vec::with_capacity(v.len());
            for &j in v {
                if j == 0 {
                    return Err(Error::ValidationFailed(format!(
                        "vertex {}: facet indices are 1-based",
                        vi + 1
                    )));
                }
                w.push(j - 1);
            }
            w.sort_unstable();
            vertices.push(w);
        }
        Ok(QuasitoricPair {
            name: self.name.clone(),
            polytope: SimplePolytope {
                dim: self.dim,
                facet_normals: self.facet_normals.clone(),
                vertices,
            },
            lambda: CharacteristicMatrix::new(self.lambda.clone()),
        })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s)
            .map_err(|e| Error::ValidationFailed(format!("bad manifold JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifold serialisation cannot fail")
    }
}

/// The segment with both characteristic entries +1: a valid pair (the
/// bounding stably complex structure on the 2-sphere).
pub fn cp1_like_pair(lambda: [i64; 2]) -> QuasitoricPair {
    QuasitoricPair {
        name: "cp1".to_string(),
        polytope: simplex(1),
        lambda: CharacteristicMatrix::new(vec![vec![lambda[0], lambda[1]]]),
    }
}
