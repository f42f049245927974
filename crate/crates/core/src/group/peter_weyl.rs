//! Orthonormal bases of the induced spaces `L²_ρ(K, H_ρ)`.
//!
//! A basis vector is `k ↦ √d_λ · T* τ_λ(k⁻¹) v` for an intertwiner
//! `T: H_ρ → H_λ` of unit Hilbert–Schmidt norm and a standard basis vector
//! `v` of `H_λ`. Such maps satisfy `f(k k₀) = ρ(k₀)⁻¹ f(k)` for `k₀ ∈ K_H`.

use num_complex::Complex64;

use super::{CompactGroup, Embedding, GroupElement, IrrepLabel};
use crate::{CMatrix, Error, Result};

/// One isotypic copy of `τ_λ` inside the induced space.
#[derive(Clone, Debug)]
pub struct BasisBlock {
    pub lambda: IrrepLabel,
    pub copy: usize,
    /// `d_λ × d_μ`, unit Hilbert–Schmidt norm, intertwines `ρ_μ` and `τ_λ|_{K_H}`.
    pub intertwiner: CMatrix,
    /// Column offset of the block's first vector.
    pub offset: usize,
    lambda_index: usize,
}

impl BasisBlock {
    pub fn dim(&self) -> usize {
        self.intertwiner.nrows()
    }
}

#[derive(Clone, Debug)]
pub struct PeterWeylBasis {
    pub host: CompactGroup,
    pub embedding: Embedding,
    pub mu: IrrepLabel,
    pub d_mu: usize,
    pub lambda_max: u32,
    pub blocks: Vec<BasisBlock>,
    lambdas: Vec<IrrepLabel>,
    len: usize,
}

impl PeterWeylBasis {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Distinct K-types present, in block order.
    pub fn k_types(&self) -> &[IrrepLabel] {
        &self.lambdas
    }

    /// `(λ, copy, v)` for every basis vector.
    pub fn block_index(&self) -> Vec<(IrrepLabel, usize, usize)> {
        self.blocks
            .iter()
            .flat_map(|b| (0..b.dim()).map(move |v| (b.lambda.clone(), b.copy, v)))
            .collect()
    }

    /// K-type weight of every basis vector.
    pub fn vector_weights(&self) -> Vec<u32> {
        self.blocks.iter().flat_map(|b| std::iter::repeat_n(b.lambda.weight(), b.dim())).collect()
    }

    /// All basis vectors at `k` as the columns of a `d_μ × len` matrix.
    pub fn evaluate(&self, k: &GroupElement) -> CMatrix {
        let mats = self.host.irrep_matrices(&self.lambdas, k);
        self.evaluate_with(&mats)
    }

    /// Same as [`evaluate`](Self::evaluate) given precomputed `τ_λ(k)` for
    /// [`k_types`](Self::k_types).
    pub fn evaluate_with(&self, taus: &[CMatrix]) -> CMatrix {
        let mut out = CMatrix::zeros(self.d_mu, self.len);
        for b in &self.blocks {
            let tau = &taus[b.lambda_index];
            let scale = (b.dim() as f64).sqrt();
            let w = (tau * &b.intertwiner).adjoint() * Complex64::from(scale);
            out.view_mut((0, b.offset), (self.d_mu, b.dim())).copy_from(&w);
        }
        out
    }
}

fn frob(a: &CMatrix, b: &CMatrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Orthonormal intertwiners `H_μ → H_λ` obtained by averaging seed matrices.
pub(crate) fn intertwiners(
    host: &CompactGroup,
    embedding: &Embedding,
    lambda: &IrrepLabel,
    mu: &IrrepLabel,
) -> Vec<CMatrix> {
    let sub = embedding.subgroup(host);
    let d_l = host.dim(lambda);
    let d_m = sub.dim(mu);
    let rule = sub.haar_quadrature(lambda.weight() as usize + mu.weight() as usize + 2);
    let pairs: Vec<(CMatrix, CMatrix)> = rule
        .nodes
        .iter()
        .map(|s| (host.irrep_matrix(lambda, &embedding.embed(host, s)), sub.irrep_matrix(mu, s).adjoint()))
        .collect();
    let mut basis: Vec<CMatrix> = Vec::new();
    for a in 0..d_l {
        for b in 0..d_m {
            let mut t = CMatrix::zeros(d_l, d_m);
            for ((tau, rho_inv), w) in pairs.iter().zip(&rule.weights) {
                // τ(s) E_ab ρ(s)⁻¹ = column a of τ(s) times row b of ρ(s)⁻¹
                t += tau.column(a) * rho_inv.row(b) * Complex64::from(*w);
            }
            for q in &basis {
                let c = frob(q, &t);
                t -= q * c;
            }
            let n = frob(&t, &t).re.sqrt();
            if n > 1e-6 {
                basis.push(t / Complex64::from(n));
            }
        }
    }
    basis
}

/// Peter–Weyl basis of the space induced from `ρ_μ` on the embedded
/// stabilizer, truncated at K-type weight `lambda_max`.
pub fn peter_weyl_basis(
    host: &CompactGroup,
    embedding: &Embedding,
    mu: &IrrepLabel,
    lambda_max: u32,
) -> Result<PeterWeylBasis> {
    let sub = embedding.subgroup(host);
    if !sub.admits(mu) {
        return Err(Error::StratumMismatch { label: mu.to_string(), stabilizer: sub.to_string() });
    }
    let mut blocks = Vec::new();
    let mut lambdas = Vec::new();
    let mut offset = 0;
    for lambda in host.irreps(lambda_max) {
        let ts = intertwiners(host, embedding, &lambda, mu);
        if ts.is_empty() {
            continue;
        }
        let lambda_index = lambdas.len();
        lambdas.push(lambda.clone());
        for (copy, t) in ts.into_iter().enumerate() {
            let d = t.nrows();
            blocks.push(BasisBlock { lambda: lambda.clone(), copy, intertwiner: t, offset, lambda_index });
            offset += d;
        }
    }
    if blocks.is_empty() {
        return Err(Error::EmptyBasis { mu: mu.to_string(), lambda_max });
    }
    Ok(PeterWeylBasis {
        host: host.clone(),
        embedding: embedding.clone(),
        mu: mu.clone(),
        d_mu: sub.dim(mu),
        lambda_max,
        blocks,
        lambdas,
        len: offset,
    })
}
