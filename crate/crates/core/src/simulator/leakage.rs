use rayon::prelude::*;

use super::decode::{syndrome_table, DECODE_CAP};
use super::SimResult;
use crate::bounds::h;
use crate::error::{cap, Error, Result};
use crate::gf2::LinearCode;
use crate::universality::CodeFamily;

/// `I([X]; X + E)` for uniform `X ∈ F₂ⁿ`, key `[X] ∈ F₂ⁿ/C` and `E ~ BSC(p)ⁿ`.
/// Given `Y`, the key is `[Y + E]`, so `I = (n − dim C) − H([E])`.
pub fn coset_key_information(c: &LinearCode, p: f64) -> Result<f64> {
    let n = c.len();
    cap("code length", n, DECODE_CAP)?;
    let hm = c.parity_check_matrix();
    let syn = syndrome_table(&hm, n);
    let mut mass = vec![0.0; 1 << hm.nrows()];
    for (e, &s) in syn.iter().enumerate() {
        let w = (e as u64).count_ones() as i32;
        mass[s as usize] += p.powi(w) * (1.0 - p).powi(n as i32 - w);
    }
    let ent: f64 = mass.iter().filter(|&&m| m > 0.0).map(|m| -m * m.log2()).sum();
    Ok(((n - c.dimension()) as f64 - ent).max(0.0))
}

/// Family-averaged information Eve's BSC(p) view carries about the hashed
/// key. The result's `floor` is `1 − h(p)`, which a family whose duals all
/// contain one fixed coordinate vector cannot get under.
pub fn counterexample_leakage(fam: &CodeFamily, p: f64) -> Result<SimResult> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("p must lie in [0,1], got {p}")));
    }
    let total = fam.total_weight() as f64;
    let avg = fam
        .members()
        .par_iter()
        .zip(fam.weights())
        .map(|(c, &w)| Ok(coset_key_information(c, p)? * w as f64 / total))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .sum();
    let mut res = SimResult::new("eve_key_information", fam.n(), &[("p", p)], avg);
    res.floor = Some(1.0 - h(p));
    Ok(res)
}
