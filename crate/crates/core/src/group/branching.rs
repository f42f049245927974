use super::embedding::character_pairing;
use super::{CompactGroup, Embedding, GroupElement, IrrepLabel};
use crate::{Error, Result};

/// Rounds a character integral to the integer it approximates.
///
/// Values within `1e-3` of an integer are accepted; anything else means the
/// quadrature rule was not exact and is reported as an error.
pub fn multiplicity_from_integral(value: f64) -> Result<u32> {
    let r = value.round();
    if (value - r).abs() > 1e-3 || r < 0.0 {
        return Err(Error::NonIntegerMultiplicity { value });
    }
    Ok(r as u32)
}

/// `[λ|_{sub} : ρ]` for an irrep `λ` of the host `K` and an irrep `ρ` of the
/// embedded subgroup.
pub fn branching_multiplicity(
    host: &CompactGroup,
    big: &IrrepLabel,
    sub: &Embedding,
    small: &IrrepLabel,
) -> Result<u32> {
    restriction_multiplicity(host, &Embedding::Whole, big, sub, small)
}

/// `[ρ|_{B} : ρ']` where `ρ` is an irrep of the subgroup `A = outer` of the host
/// and `B = inner ⊆ A`.
pub fn restriction_multiplicity(
    host: &CompactGroup,
    outer: &Embedding,
    big: &IrrepLabel,
    inner: &Embedding,
    small: &IrrepLabel,
) -> Result<u32> {
    let outer_group = outer.subgroup(host);
    let inner_group = inner.subgroup(host);
    check_label(&outer_group, big)?;
    check_label(&inner_group, small)?;
    if !outer.contains(inner) {
        return Err(Error::InvalidInput(format!("{inner:?} is not contained in {outer:?}")));
    }
    conjugated_multiplicity(&inner_group, big.weight() as usize + small.weight() as usize + 2, small, |s| {
        let k = inner.embed(host, s);
        outer_group.character(big, &outer.local(host, &k))
    })
}

/// Multiplicity of `small` in the class function `chi_big` restricted to
/// `group`, parametrized by an arbitrary embedding closure.
pub fn conjugated_multiplicity(
    group: &CompactGroup,
    order: usize,
    small: &IrrepLabel,
    chi_big: impl Fn(&GroupElement) -> num_complex::Complex64,
) -> Result<u32> {
    let v = character_pairing(group, order, chi_big, |s| group.character(small, s));
    if v.im.abs() > 1e-3 {
        return Err(Error::NonIntegerMultiplicity { value: v.re });
    }
    multiplicity_from_integral(v.re)
}

fn check_label(group: &CompactGroup, label: &IrrepLabel) -> Result<()> {
    if group.admits(label) {
        Ok(())
    } else {
        Err(Error::StratumMismatch { label: label.to_string(), stabilizer: group.to_string() })
    }
}
