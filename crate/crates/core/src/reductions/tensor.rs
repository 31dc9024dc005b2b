//! Gap amplification by Kronecker powers.

use num_bigint::BigInt;

use super::{Label, MdpInstance, SvpInstance};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::lattice::IntegerLattice;

fn check_cells(m: usize, n: usize, c: u32, budget: Budget) -> Result<()> {
    let cells = (m as u128).checked_pow(c).zip((n.max(1) as u128).checked_pow(c));
    match cells.and_then(|(a, b)| a.checked_mul(b)) {
        Some(x) => budget.check("tensor power cells", x),
        None => Err(budget.exceeded("tensor power cells", format!("{m}^{c} x {n}^{c}"))),
    }
}

fn kron_vec<T: Clone>(a: &[T], b: &[T], mul: impl Fn(&T, &T) -> T) -> Vec<T> {
    a.iter().flat_map(|x| b.iter().map(|y| mul(x, y)).collect::<Vec<_>>()).collect()
}

fn power_vec<T: Clone>(v: &[T], c: u32, mul: impl Fn(&T, &T) -> T + Copy) -> Vec<T> {
    let mut out = v.to_vec();
    for _ in 1..c {
        out = kron_vec(&out, v, mul);
    }
    out
}

/// `(G^{⊗c}, k^c)` with gap `gamma^c`. Sound for codes without conditions.
pub fn tensor_boost_mdp(inst: &MdpInstance, c: u32, budget: Budget) -> Result<MdpInstance> {
    if c == 0 {
        return Err(Error::InvalidParameter("tensor exponent must be positive".into()));
    }
    let n = inst.generator.first().map_or(0, Vec::len);
    check_cells(inst.m, n, c, budget)?;
    let base = inst.code()?;
    let mut code = base.clone();
    for _ in 1..c {
        code = code.tensor(&base)?;
    }
    let f: FiniteField = inst.field()?;
    let k = inst
        .k
        .checked_pow(c)
        .ok_or_else(|| Error::Overflow("k^c".into()))?;
    let m = inst.m.checked_pow(c).ok_or_else(|| Error::Overflow("m^c".into()))?;
    Ok(MdpInstance {
        q: inst.q,
        m,
        generator: code.generator().clone(),
        k,
        gamma: inst.gamma.pow(c as i32),
        label: inst.label,
        witness: inst
            .witness
            .as_ref()
            .map(|w| power_vec(w, c, |a: &Elem, b: &Elem| f.mul(*a, *b))),
    })
}

/// `(B^{⊗c}, (k^p)^c)` with gap `gamma^c`. Refuses unless the instance carries
/// a tensorability certificate for exponent at least `c`. A NO label is kept
/// only when the certificate's bound covers the NO threshold.
pub fn tensor_boost_svp(inst: &SvpInstance, c: u32, budget: Budget) -> Result<SvpInstance> {
    if c == 0 {
        return Err(Error::InvalidParameter("tensor exponent must be positive".into()));
    }
    let cert = inst
        .certificate
        .as_ref()
        .ok_or_else(|| Error::Refused("lattice tensoring needs a tensorability certificate".into()))?;
    if cert.c < c {
        return Err(Error::Refused(format!("certificate covers exponent {}, asked for {c}", cert.c)));
    }
    if cert.p != inst.p {
        return Err(Error::Refused("certificate is for a different norm".into()));
    }
    let n = inst.basis.first().map_or(0, Vec::len);
    check_cells(inst.m, n, c, budget)?;
    let l = lattice_power(&inst.lattice()?, c);
    let label = match inst.label {
        Label::No if cert.d_pow < inst.no_threshold_pow()? => Label::Unknown,
        other => other,
    };
    let m = inst.m.checked_pow(c).ok_or_else(|| Error::Overflow("m^c".into()))?;
    Ok(SvpInstance {
        p: inst.p,
        m,
        basis: l.basis_columns(),
        threshold_pow: inst.threshold_pow.pow(c as i32),
        gamma: inst.gamma.pow(c as i32),
        label,
        witness: inst
            .witness
            .as_ref()
            .map(|w| power_vec(w, c, |a: &BigInt, b: &BigInt| a * b)),
        certificate: None,
    })
}

pub(crate) fn lattice_power(l: &IntegerLattice, c: u32) -> IntegerLattice {
    let mut out = l.clone();
    for _ in 1..c {
        out = out.tensor(l);
    }
    out
}
