//! Rational interpolation of complex frequency data via Loewner pencils.
//!
//! The flow is conjugate_close -> partition -> build_pencil ->
//! numerical_order -> realize -> realify, with interpolation_error
//! available after every stage. All stages are pure and deterministic.

use nalgebra::{DMatrix, DVector, RowDVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lti::{DescriptorSs, Domain, Scalar};

/// Plane the interpolation nodes live on: the Laplace plane or the z-plane
/// of a sampled system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Plane {
    SPlane,
    ZPlane { period: f64 },
}

impl Plane {
    pub fn domain(&self) -> Domain {
        match self {
            Plane::SPlane => Domain::ContinuousS,
            Plane::ZPlane { period } => Domain::DiscreteZ { period: *period },
        }
    }
}

/// Paired interpolation nodes and values on one plane.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationSet {
    nodes: Vec<Complex64>,
    values: Vec<Complex64>,
    plane: Plane,
}

impl InterpolationSet {
    pub fn new(nodes: Vec<Complex64>, values: Vec<Complex64>, plane: Plane) -> Result<Self> {
        if nodes.len() != values.len() {
            return Err(Error::DimensionMismatch {
                context: "node and value lists must have equal length",
            });
        }
        for (i, a) in nodes.iter().enumerate() {
            if nodes[i + 1..].iter().any(|b| a == b) {
                return Err(Error::DuplicateNode { node: *a });
            }
        }
        Ok(Self {
            nodes,
            values,
            plane,
        })
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn plane(&self) -> Plane {
        self.plane
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// One conjugate-closed unit: a real-axis singleton or an adjacent pair
/// (node with positive imaginary part first, its conjugate second).
type Unit = Vec<(Complex64, Complex64)>;

/// Group a set into conjugate units, adding missing partners and
/// canonicalizing pair values to exact conjugates. Units come back sorted
/// by (|Im node|, Re node) so downstream stages are deterministic.
fn conjugate_units(set: &InterpolationSet) -> Result<Vec<Unit>> {
    let n = set.len();
    let mut visited = vec![false; n];
    let mut units: Vec<((f64, f64), Unit)> = Vec::new();
    for i in 0..n {
        if visited[i] {
            continue;
        }
        visited[i] = true;
        let node = set.nodes[i];
        let value = set.values[i];
        if node.im == 0.0 {
            let residual = value.im.abs();
            if residual > 1e-12 * value.norm().max(1.0) {
                return Err(Error::InconsistentConjugate { node, residual });
            }
            units.push((
                (0.0, node.re),
                vec![(node, Complex64::new(value.re, 0.0))],
            ));
            continue;
        }
        // Find the exact conjugate partner, if the caller supplied one.
        let partner = (0..n).find(|&j| j != i && set.nodes[j] == node.conj());
        if let Some(j) = partner {
            visited[j] = true;
            let residual = (set.values[j] - value.conj()).norm();
            if residual > 1e-12 * value.norm().max(1.0) {
                return Err(Error::InconsistentConjugate { node, residual });
            }
        }
        let (plus_node, plus_value) = if node.im > 0.0 {
            (node, value)
        } else {
            (node.conj(), value.conj())
        };
        units.push((
            (plus_node.im, plus_node.re),
            vec![
                (plus_node, plus_value),
                (plus_node.conj(), plus_value.conj()),
            ],
        ));
    }
    units.sort_by(|a, b| {
        a.0 .0
            .total_cmp(&b.0 .0)
            .then_with(|| a.0 .1.total_cmp(&b.0 .1))
    });
    Ok(units.into_iter().map(|(_, u)| u).collect())
}

fn from_units(units: &[Unit], plane: Plane) -> Result<InterpolationSet> {
    let mut nodes = Vec::new();
    let mut values = Vec::new();
    for unit in units {
        for &(n, v) in unit {
            nodes.push(n);
            values.push(v);
        }
    }
    InterpolationSet::new(nodes, values, plane)
}

/// Close a set under complex conjugation of (node, value) pairs. Real-axis
/// nodes must carry real values; an existing conjugate partner must carry
/// the conjugate value to within 1e-12 (relative above unit scale).
/// Output ordering is canonical: units ascending by |Im|, pairs adjacent
/// with the positive-imaginary node first.
pub fn conjugate_close(set: &InterpolationSet) -> Result<InterpolationSet> {
    from_units(&conjugate_units(set)?, set.plane)
}

/// Split a conjugate-closed set into disjoint left/right sets for the
/// Loewner construction: units are assigned alternately in ascending order
/// of |Im(node)|, so both sides stay conjugate-closed and differ by at
/// most one unit.
pub fn partition(set: &InterpolationSet) -> Result<(InterpolationSet, InterpolationSet)> {
    let units = conjugate_units(set)?;
    if units.len() < 2 {
        return Err(Error::TooFewPoints {
            got: units.len(),
            need: 2,
        });
    }
    let (left, right): (Vec<_>, Vec<_>) = units
        .into_iter()
        .enumerate()
        .partition(|(i, _)| i % 2 == 0);
    let left: Vec<Unit> = left.into_iter().map(|(_, u)| u).collect();
    let right: Vec<Unit> = right.into_iter().map(|(_, u)| u).collect();
    Ok((from_units(&left, set.plane)?, from_units(&right, set.plane)?))
}

/// Loewner and shifted-Loewner matrices over disjoint left data (mu, v)
/// and right data (lambda, w):
/// L_ij = (v_i - w_j)/(mu_i - lambda_j),
/// Ls_ij = (mu_i v_i - lambda_j w_j)/(mu_i - lambda_j).
#[derive(Debug, Clone)]
pub struct LoewnerPencil {
    l: DMatrix<Complex64>,
    ls: DMatrix<Complex64>,
    v: DVector<Complex64>,
    w: RowDVector<Complex64>,
    left_nodes: Vec<Complex64>,
    right_nodes: Vec<Complex64>,
    plane: Plane,
}

impl LoewnerPencil {
    pub fn l(&self) -> &DMatrix<Complex64> {
        &self.l
    }

    pub fn ls(&self) -> &DMatrix<Complex64> {
        &self.ls
    }

    pub fn v(&self) -> &DVector<Complex64> {
        &self.v
    }

    pub fn w(&self) -> &RowDVector<Complex64> {
        &self.w
    }

    pub fn left_nodes(&self) -> &[Complex64] {
        &self.left_nodes
    }

    pub fn right_nodes(&self) -> &[Complex64] {
        &self.right_nodes
    }

    pub fn plane(&self) -> Plane {
        self.plane
    }
}

/// Fill the Loewner pencil from disjoint left/right data.
pub fn build_pencil(left: &InterpolationSet, right: &InterpolationSet) -> Result<LoewnerPencil> {
    if left.plane != right.plane {
        return Err(Error::DimensionMismatch {
            context: "left and right data must live on the same plane",
        });
    }
    if left.is_empty() || right.is_empty() {
        return Err(Error::TooFewPoints { got: 0, need: 2 });
    }
    for &mu in &left.nodes {
        if let Some(&lambda) = right.nodes.iter().find(|&&l| l == mu) {
            return Err(Error::NodeCollision {
                left: mu,
                right: lambda,
            });
        }
    }
    let p = left.len();
    let q = right.len();
    let l = DMatrix::from_fn(p, q, |i, j| {
        (left.values[i] - right.values[j]) / (left.nodes[i] - right.nodes[j])
    });
    let ls = DMatrix::from_fn(p, q, |i, j| {
        (left.nodes[i] * left.values[i] - right.nodes[j] * right.values[j])
            / (left.nodes[i] - right.nodes[j])
    });
    Ok(LoewnerPencil {
        l,
        ls,
        v: DVector::from_vec(left.values.clone()),
        w: RowDVector::from_row_slice(&right.values),
        left_nodes: left.nodes.clone(),
        right_nodes: right.nodes.clone(),
        plane: left.plane,
    })
}

/// Numerical order of the data: singular values of the row-stacked [L Ls]
/// and column-stacked [L; Ls] matrices above tol_rel x sigma_max.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderDecision {
    /// max of the two significant-singular-value counts.
    pub r: usize,
    /// Singular values of [L Ls], descending.
    pub row_spectrum: Vec<f64>,
    /// Singular values of [L; Ls], descending.
    pub col_spectrum: Vec<f64>,
}

/// Default relative rank tolerance; surfaced as a first-class parameter
/// because the order decision is the fragile step of the whole method.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

fn significant(spectrum: &[f64], tol_rel: f64) -> usize {
    let max = spectrum.first().copied().unwrap_or(0.0);
    if max <= 0.0 {
        return 0;
    }
    spectrum.iter().filter(|&&s| s > tol_rel * max).count()
}

fn stack_rows(l: &DMatrix<Complex64>, ls: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (p, q) = l.shape();
    DMatrix::from_fn(p, 2 * q, |i, j| if j < q { l[(i, j)] } else { ls[(i, j - q)] })
}

fn stack_cols(l: &DMatrix<Complex64>, ls: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (p, q) = l.shape();
    DMatrix::from_fn(2 * p, q, |i, j| if i < p { l[(i, j)] } else { ls[(i - p, j)] })
}

/// Decide the realization order from the pencil's singular-value spectra.
pub fn numerical_order(pencil: &LoewnerPencil, tol_rel: f64) -> OrderDecision {
    let rows = stack_rows(&pencil.l, &pencil.ls).singular_values();
    let cols = stack_cols(&pencil.l, &pencil.ls).singular_values();
    let row_spectrum: Vec<f64> = rows.iter().copied().collect();
    let col_spectrum: Vec<f64> = cols.iter().copied().collect();
    let r = significant(&row_spectrum, tol_rel).max(significant(&col_spectrum, tol_rel));
    OrderDecision {
        r,
        row_spectrum,
        col_spectrum,
    }
}

/// Complex Loewner realization bundled with the pencil it came from, so it
/// can be realified or re-projected at a lower order later.
#[derive(Debug, Clone)]
pub struct ComplexRealization {
    system: DescriptorSs<Complex64>,
    pencil: LoewnerPencil,
    r: usize,
    rank_warning: Option<&'static str>,
}

impl ComplexRealization {
    pub fn system(&self) -> &DescriptorSs<Complex64> {
        &self.system
    }

    pub fn pencil(&self) -> &LoewnerPencil {
        &self.pencil
    }

    pub fn order(&self) -> usize {
        self.r
    }

    /// Present when the projected E lost rank relative to the decided
    /// order; the pencil may encode a biproper part through a singular E,
    /// so this is a note, not a failure.
    pub fn rank_warning(&self) -> Option<&'static str> {
        self.rank_warning
    }
}

/// Project the pencil onto its dominant rank-r subspaces:
/// Y = first r left singular vectors of [L Ls], X = first r right singular
/// vectors of [L; Ls], realization (E, A, B, C) = (-Y^H L X, -Y^H Ls X,
/// Y^H V, W X).
pub fn realize(pencil: &LoewnerPencil, r: usize) -> Result<ComplexRealization> {
    let (p, q) = pencil.l.shape();
    let max = p.min(q);
    if r < 1 || r > max {
        return Err(Error::OrderOutOfRange { r, max });
    }
    let svd_rows = nalgebra::SVD::new(stack_rows(&pencil.l, &pencil.ls), true, false);
    let u = svd_rows.u.expect("SVD with u requested");
    let y = u.columns(0, r).into_owned();
    let svd_cols = nalgebra::SVD::new(stack_cols(&pencil.l, &pencil.ls), false, true);
    let v_t = svd_cols.v_t.expect("SVD with v_t requested");
    let x = v_t.rows(0, r).adjoint();

    let e = -(y.adjoint() * &pencil.l * &x);
    let a = -(y.adjoint() * &pencil.ls * &x);
    let b = y.adjoint() * &pencil.v;
    let c = &pencil.w * &x;

    let sv = e.clone().singular_values();
    let rank_warning = if sv[sv.len() - 1] <= 1e-12 * sv[0] {
        Some("projected E is rank-deficient; the data likely has a biproper/polynomial part")
    } else {
        None
    };
    let system = DescriptorSs::new(
        e,
        a,
        b,
        RowDVector::from_iterator(r, c.iter().copied()),
        Complex64::new(0.0, 0.0),
        pencil.plane.domain(),
    )?;
    Ok(ComplexRealization {
        system,
        pencil: pencil.clone(),
        r,
        rank_warning,
    })
}

/// Block-unitary map sending each adjacent conjugate pair to (real part,
/// imaginary part) coordinates; real-axis singletons map to themselves.
fn block_j(nodes: &[Complex64]) -> Result<DMatrix<Complex64>> {
    let n = nodes.len();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut j = DMatrix::<Complex64>::zeros(n, n);
    let mut i = 0;
    while i < n {
        if nodes[i].im == 0.0 {
            j[(i, i)] = Complex64::new(1.0, 0.0);
            i += 1;
        } else {
            if i + 1 >= n || nodes[i + 1] != nodes[i].conj() {
                return Err(Error::DimensionMismatch {
                    context: "conjugate pairs must be adjacent for realification",
                });
            }
            j[(i, i)] = Complex64::new(s, 0.0);
            j[(i + 1, i)] = Complex64::new(s, 0.0);
            j[(i, i + 1)] = Complex64::new(0.0, s);
            j[(i + 1, i + 1)] = Complex64::new(0.0, -s);
            i += 2;
        }
    }
    Ok(j)
}

fn imag_residue_matrix(m: &DMatrix<Complex64>) -> f64 {
    let total = m.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let imag = m.iter().map(|c| c.im * c.im).sum::<f64>().sqrt();
    if total == 0.0 {
        0.0
    } else {
        imag / total
    }
}

/// Real realization of a conjugate-closed complex one.
///
/// The block-unitary transform is applied to the pencil data on both sides
/// (turning L, Ls, V, W into real matrices up to a residue that is checked
/// against 1e-8), and the rank-r projection is recomputed with real SVDs.
/// The projected subspaces are the unitary images of the complex ones, so
/// the transfer function is preserved exactly, including at truncated
/// orders.
pub fn realify(realization: &ComplexRealization) -> Result<DescriptorSs<f64>> {
    let pencil = &realization.pencil;
    let jp = block_j(&pencil.left_nodes)?;
    let jq = block_j(&pencil.right_nodes)?;

    let l_t = jp.adjoint() * &pencil.l * &jq;
    let ls_t = jp.adjoint() * &pencil.ls * &jq;
    let v_t = jp.adjoint() * &pencil.v;
    let w_t = &pencil.w * &jq;

    let mut residual = imag_residue_matrix(&l_t).max(imag_residue_matrix(&ls_t));
    let v_mat = DMatrix::from_column_slice(v_t.len(), 1, v_t.as_slice());
    let w_mat = DMatrix::from_row_slice(1, w_t.len(), w_t.transpose().as_slice());
    residual = residual
        .max(imag_residue_matrix(&v_mat))
        .max(imag_residue_matrix(&w_mat));
    if residual > 1e-8 {
        return Err(Error::ResidualImaginary { residual });
    }

    let l_r = l_t.map(|c| c.re);
    let ls_r = ls_t.map(|c| c.re);
    let v_r = DVector::from_iterator(v_t.len(), v_t.iter().map(|c| c.re));
    let w_r = RowDVector::from_iterator(w_t.len(), w_t.iter().map(|c| c.re));

    let r = realization.r;
    let (p, q) = l_r.shape();
    let rows = DMatrix::from_fn(p, 2 * q, |i, j| {
        if j < q {
            l_r[(i, j)]
        } else {
            ls_r[(i, j - q)]
        }
    });
    let cols = DMatrix::from_fn(2 * p, q, |i, j| {
        if i < p {
            l_r[(i, j)]
        } else {
            ls_r[(i - p, j)]
        }
    });
    let svd_rows = nalgebra::SVD::new(rows, true, false);
    let y = svd_rows
        .u
        .expect("SVD with u requested")
        .columns(0, r)
        .into_owned();
    let svd_cols = nalgebra::SVD::new(cols, false, true);
    let x = svd_cols
        .v_t
        .expect("SVD with v_t requested")
        .rows(0, r)
        .transpose();

    let e = -(y.transpose() * &l_r * &x);
    let a = -(y.transpose() * &ls_r * &x);
    let b = y.transpose() * v_r;
    let c = w_r * &x;
    DescriptorSs::new(
        e,
        a,
        b,
        RowDVector::from_iterator(r, c.iter().copied()),
        0.0,
        pencil.plane.domain(),
    )
}

/// Per-node interpolation-error report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NodeError {
    pub node: Complex64,
    pub abs: f64,
    pub rel: f64,
}

/// Interpolation-error summary over a node set. Relative errors use the
/// data value's magnitude (floored at 1e-14) as the denominator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorReport {
    pub max_abs: f64,
    pub max_rel: f64,
    pub per_node: Vec<NodeError>,
}

/// Measure |H(node) - value| at every node of a set. A pole hit at a node
/// is reported as infinite error rather than a failure.
pub fn interpolation_error<T: Scalar>(
    sys: &DescriptorSs<T>,
    set: &InterpolationSet,
) -> ErrorReport {
    let mut per_node = Vec::with_capacity(set.len());
    let mut max_abs = 0.0f64;
    let mut max_rel = 0.0f64;
    for (&node, &value) in set.nodes.iter().zip(&set.values) {
        let (abs, rel) = match sys.eval(node) {
            Ok(h) => {
                let abs = (h - value).norm();
                (abs, abs / value.norm().max(1e-14))
            }
            Err(_) => (f64::INFINITY, f64::INFINITY),
        };
        max_abs = max_abs.max(abs);
        max_rel = max_rel.max(rel);
        per_node.push(NodeError { node, abs, rel });
    }
    ErrorReport {
        max_abs,
        max_rel,
        per_node,
    }
}
