//! Named experiment configurations.

use anyhow::{bail, Result};
use qexpr_core::ansatz::AnsatzSpec;

/// Counter-based seed derivation: one master seed fans out into
/// independent streams per (row, trial) without overlap.
pub fn derive_seed(master: u64, row: u64, trial: u64) -> u64 {
    // SplitMix64 over a paired counter.
    let mut z = master
        .wrapping_add(row.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(trial.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The KL-divergence parameter table: every (n, family, l, m) row with
/// block depth m for TEN/ALT and l = n for HEA.
pub fn table1(name: &str) -> Result<Vec<AnsatzSpec>> {
    if name != "table1" {
        bail!("unknown preset {name:?} (expected table1)");
    }
    let mut specs = Vec::new();
    for n in [4usize, 6] {
        for ell in [2usize, 3] {
            specs.push(AnsatzSpec::ten(n, ell, 2, 2));
        }
        for ell in [2usize, 3] {
            specs.push(AnsatzSpec::alt(n, ell, 2, 2));
        }
        specs.push(AnsatzSpec::hea(n, n));
    }
    for ell in [2usize, 3] {
        for m in [2usize, 4] {
            specs.push(AnsatzSpec::ten(8, ell, m, m));
        }
    }
    for ell in [2usize, 3] {
        for m in [2usize, 4] {
            specs.push(AnsatzSpec::alt(8, ell, m, m));
        }
    }
    specs.push(AnsatzSpec::hea(8, 8));
    Ok(specs)
}

/// The exact ratio grid: (family, l, m, n) for m in {2, 4, 10},
/// n/m in 1..=10, TEN plus ALT at l in {2, 3}.
pub fn fig2_grid(name: &str) -> Result<Vec<(String, usize, usize, usize)>> {
    if name != "fig2-grid" {
        bail!("unknown preset {name:?} (expected fig2-grid)");
    }
    let mut points = Vec::new();
    for m in [2usize, 4, 10] {
        for ratio in 1..=10usize {
            let n = m * ratio;
            points.push(("ten".to_string(), 2, m, n));
            for ell in [2usize, 3] {
                points.push(("alt".to_string(), ell, m, n));
            }
        }
    }
    Ok(points)
}

/// The trainability study: TEN / ALT / HEA on the 4-qubit Heisenberg
/// ring with the depths of the KL table's n = 4 rows at l = 3. The ALT
/// even layers wrap around the register boundary to match the ring
/// topology of the Hamiltonian.
pub fn section4(name: &str) -> Result<Vec<AnsatzSpec>> {
    if name != "section4" {
        bail!("unknown preset {name:?} (expected section4)");
    }
    Ok(vec![
        AnsatzSpec::ten(4, 3, 2, 2),
        AnsatzSpec::alt_periodic(4, 3, 2, 2),
        AnsatzSpec::hea(4, 4),
    ])
}
