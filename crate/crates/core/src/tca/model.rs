use nalgebra::DMatrix;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::kernel::{gram_matrix, KernelSpec};
use super::mmd::{centering_matrix, scaling_matrix};
use crate::bench::ObjectiveVector;
use crate::error::{Error, Result};

/// A fitted transfer component analysis model.
///
/// The sample bank holds the `m` source samples followed by the `n` target samples.
/// A point `p` is embedded as `W^T kappa_p` with `kappa_p[i] = k(bank[i], p)`, so the
/// bank order is part of the model and never changes after fitting.
#[derive(Debug, Clone, PartialEq)]
pub struct TcaModel {
    bank: Vec<ObjectiveVector>,
    kernel: KernelSpec,
    /// `(m + n) x d`, unit-norm columns, leading eigenvector first.
    w: DMatrix<f64>,
    eigenvalues: Vec<f64>,
    mu: f64,
    m: usize,
    n: usize,
}

/// Fits the embedding from source and target samples.
///
/// The columns of `W` are the `d` leading eigenvectors of `(KLK + mu I)^{-1} KHK`,
/// obtained from the equivalent symmetric-definite pencil `KHK w = lambda (KLK + mu I) w`.
/// Each column is scaled to unit Euclidean norm and its largest-magnitude entry is made
/// positive.
pub fn tca_fit(
    source: &[ObjectiveVector],
    target: &[ObjectiveVector],
    kernel: KernelSpec,
    d: usize,
    mu: f64,
) -> Result<TcaModel> {
    kernel.validate()?;
    let (m, n) = (source.len(), target.len());
    if m == 0 || n == 0 {
        return Err(Error::arg("tca needs nonempty source and target samples"));
    }
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::arg(format!("tradeoff mu must be positive, got {mu}")));
    }
    let size = m + n;
    if d == 0 || d > size {
        return Err(Error::arg(format!("latent dimension {d} not in 1..={size}")));
    }
    let bank: Vec<ObjectiveVector> = source.iter().chain(target).cloned().collect();
    let k = gram_matrix(&bank, &kernel)?;
    let l = scaling_matrix(m, n)?;
    let h = centering_matrix(size)?;

    let mut lhs = &k * &h * &k;
    symmetrize(&mut lhs);
    let mut rhs = &k * &l * &k;
    symmetrize(&mut rhs);
    for i in 0..size {
        rhs[(i, i)] += mu;
    }

    let chol = rhs
        .cholesky()
        .ok_or_else(|| Error::Numerical("KLK + mu I is not positive definite".into()))?;
    let lower = chol.l();
    // C = L^{-1} (KHK) L^{-T}
    let half = lower
        .solve_lower_triangular(&lhs)
        .ok_or_else(|| Error::Numerical("triangular solve failed".into()))?;
    let mut reduced = lower
        .solve_lower_triangular(&half.transpose())
        .ok_or_else(|| Error::Numerical("triangular solve failed".into()))?;
    symmetrize(&mut reduced);

    let eig = reduced.symmetric_eigen();
    if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("eigensolver returned non-finite values".into()));
    }
    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let upper = lower.transpose();
    let mut w = DMatrix::zeros(size, d);
    let mut eigenvalues = Vec::with_capacity(d);
    for (col, &idx) in order.iter().take(d).enumerate() {
        let y = eig.eigenvectors.column(idx).into_owned();
        let mut v = upper
            .solve_upper_triangular(&y)
            .ok_or_else(|| Error::Numerical("back substitution failed".into()))?;
        let norm = v.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Numerical("degenerate eigenvector".into()));
        }
        v /= norm;
        let pivot = v
            .iter()
            .enumerate()
            .fold(
                (0, 0.0f64),
                |best, (i, x)| if x.abs() > best.1 { (i, x.abs()) } else { best },
            )
            .0;
        if v[pivot] < 0.0 {
            v.neg_mut();
        }
        w.set_column(col, &v);
        eigenvalues.push(eig.eigenvalues[idx]);
    }

    Ok(TcaModel {
        bank,
        kernel,
        w,
        eigenvalues,
        mu,
        m,
        n,
    })
}

fn symmetrize(a: &mut DMatrix<f64>) {
    let n = a.nrows();
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
}

impl TcaModel {
    /// Builds a model from explicit parts.
    pub fn from_parts(
        bank: Vec<ObjectiveVector>,
        kernel: KernelSpec,
        w: DMatrix<f64>,
        m: usize,
        mu: f64,
    ) -> Result<Self> {
        kernel.validate()?;
        if bank.is_empty() || m == 0 || m >= bank.len() {
            return Err(Error::arg(
                "bank must hold m >= 1 source and n >= 1 target samples",
            ));
        }
        if w.nrows() != bank.len() || w.ncols() == 0 {
            return Err(Error::arg(format!(
                "W must be {} x d, got {} x {}",
                bank.len(),
                w.nrows(),
                w.ncols()
            )));
        }
        let dim = bank[0].len();
        if bank.iter().any(|p| p.len() != dim) {
            return Err(Error::arg("bank vectors differ in length"));
        }
        let n = bank.len() - m;
        Ok(Self {
            eigenvalues: vec![f64::NAN; w.ncols()],
            bank,
            kernel,
            w,
            mu,
            m,
            n,
        })
    }

    pub fn latent_dim(&self) -> usize {
        self.w.ncols()
    }

    pub fn projection(&self) -> &DMatrix<f64> {
        &self.w
    }

    /// Eigenvalues of the retained directions, non-increasing.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn bank(&self) -> &[ObjectiveVector] {
        &self.bank
    }

    pub fn kernel(&self) -> KernelSpec {
        self.kernel
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn source_count(&self) -> usize {
        self.m
    }

    pub fn target_count(&self) -> usize {
        self.n
    }

    pub fn input_dim(&self) -> usize {
        self.bank[0].len()
    }

    /// Latent coordinates `W^T kappa_p`.
    pub fn map(&self, p: &[f64]) -> Result<Vec<f64>> {
        if p.len() != self.input_dim() {
            return Err(Error::arg(format!(
                "expected a {}-vector, got length {}",
                self.input_dim(),
                p.len()
            )));
        }
        let mut scratch = Mapper::new(self);
        Ok(scratch.map(p).to_vec())
    }

    /// Same as [`TcaModel::map`] but reusing buffers; no length check.
    pub(crate) fn mapper(&self) -> Mapper<'_> {
        Mapper::new(self)
    }
}

/// Reusable buffers for repeated embedding in hot loops.
pub(crate) struct Mapper<'a> {
    model: &'a TcaModel,
    kappa: Vec<f64>,
    out: Vec<f64>,
}

impl<'a> Mapper<'a> {
    fn new(model: &'a TcaModel) -> Self {
        Self {
            model,
            kappa: vec![0.0; model.bank.len()],
            out: vec![0.0; model.latent_dim()],
        }
    }

    pub(crate) fn map(&mut self, p: &[f64]) -> &[f64] {
        let model = self.model;
        for (slot, b) in self.kappa.iter_mut().zip(&model.bank) {
            *slot = model.kernel.apply(b, p);
        }
        for (j, out) in self.out.iter_mut().enumerate() {
            *out = model
                .w
                .column(j)
                .iter()
                .zip(&self.kappa)
                .map(|(w, k)| w * k)
                .sum();
        }
        &self.out
    }
}

#[derive(Serialize, Deserialize)]
struct TcaModelDoc {
    bank: Vec<ObjectiveVector>,
    kernel: KernelSpec,
    /// Row-major, `(m + n)` rows of length `d`.
    w: Vec<Vec<f64>>,
    eigenvalues: Vec<Option<f64>>,
    d: usize,
    mu: f64,
    m: usize,
    n: usize,
}

impl Serialize for TcaModel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TcaModelDoc {
            bank: self.bank.clone(),
            kernel: self.kernel,
            w: self.w.row_iter().map(|r| r.iter().copied().collect()).collect(),
            eigenvalues: self
                .eigenvalues
                .iter()
                .map(|v| v.is_finite().then_some(*v))
                .collect(),
            d: self.latent_dim(),
            mu: self.mu,
            m: self.m,
            n: self.n,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TcaModel {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = TcaModelDoc::deserialize(de)?;
        if doc.w.len() != doc.m + doc.n || doc.w.iter().any(|r| r.len() != doc.d) {
            return Err(D::Error::custom("W shape does not match m + n by d"));
        }
        let flat: Vec<f64> = doc.w.into_iter().flatten().collect();
        let w = DMatrix::from_row_slice(doc.m + doc.n, doc.d, &flat);
        let mut model =
            TcaModel::from_parts(doc.bank, doc.kernel, w, doc.m, doc.mu).map_err(D::Error::custom)?;
        model.eigenvalues = doc
            .eigenvalues
            .into_iter()
            .map(|v| v.unwrap_or(f64::NAN))
            .collect();
        Ok(model)
    }
}
