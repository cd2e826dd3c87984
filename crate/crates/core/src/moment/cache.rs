//! On-disk cache for moment-chain tables, keyed by (l, m).
//!
//! Building B(3, m) contracts ~65k delta networks; the result is a pure
//! function of (l, m), so it is stored once as JSON rationals (decimal
//! `num` / `den` strings) and reloaded on subsequent runs. The directory
//! is taken from the `QEXPR_CACHE_DIR` environment variable; writes are
//! atomic-rename so concurrent writers of identical content are harmless.

use super::chain::MomentChain;
use crate::error::{Error, Result};
use num::{BigInt, BigRational};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::str::FromStr;

pub const CACHE_DIR_ENV: &str = "QEXPR_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct RationalRepr {
    num: String,
    den: String,
}

impl RationalRepr {
    fn encode(r: &BigRational) -> Self {
        RationalRepr { num: r.numer().to_string(), den: r.denom().to_string() }
    }

    fn decode(&self) -> Result<BigRational> {
        let num = BigInt::from_str(&self.num)
            .map_err(|e| Error::CacheFormat(format!("bad numerator {:?}: {e}", self.num)))?;
        let den = BigInt::from_str(&self.den)
            .map_err(|e| Error::CacheFormat(format!("bad denominator {:?}: {e}", self.den)))?;
        if den == BigInt::from(0) {
            return Err(Error::CacheFormat("zero denominator".into()));
        }
        Ok(BigRational::new(num, den))
    }
}

#[derive(Serialize, Deserialize)]
struct ChainRepr {
    ell: usize,
    m: usize,
    lambda: Vec<RationalRepr>,
    a: Vec<RationalRepr>,
    /// Row-major flattened B matrix.
    b: Vec<RationalRepr>,
}

fn cache_file(dir: &Path, ell: usize, m: usize) -> PathBuf {
    dir.join(format!("chain_l{ell}_m{m}.json"))
}

/// Cache directory from the environment, if configured.
pub fn cache_dir_from_env() -> Option<PathBuf> {
    std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from)
}

pub fn store_chain(dir: &Path, chain: &MomentChain) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let repr = ChainRepr {
        ell: chain.ell(),
        m: chain.m(),
        lambda: chain.lambda_prefactors().iter().map(RationalRepr::encode).collect(),
        a: chain.a_bare().iter().map(RationalRepr::encode).collect(),
        b: chain.b_bare_flat().iter().map(RationalRepr::encode).collect(),
    };
    let body = serde_json::to_vec(&repr)
        .map_err(|e| Error::CacheFormat(format!("serialize: {e}")))?;
    let target = cache_file(dir, chain.ell(), chain.m());
    let tmp = target.with_extension(format!("tmp.{}", std::process::id()));
    std::fs::write(&tmp, body)?;
    std::fs::rename(&tmp, &target)?;
    Ok(())
}

/// Loads the chain for (l, m) if a cache file exists.
pub fn load_chain(dir: &Path, ell: usize, m: usize) -> Result<Option<MomentChain>> {
    let path = cache_file(dir, ell, m);
    let body = match std::fs::read(&path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let repr: ChainRepr = serde_json::from_slice(&body)
        .map_err(|e| Error::CacheFormat(format!("{}: {e}", path.display())))?;
    if repr.ell != ell || repr.m != m {
        return Err(Error::CacheFormat(format!(
            "{}: keyed (l={}, m={}) but contains (l={}, m={})",
            path.display(),
            ell,
            m,
            repr.ell,
            repr.m
        )));
    }
    let decode_all = |items: &[RationalRepr]| -> Result<Vec<BigRational>> {
        items.iter().map(RationalRepr::decode).collect()
    };
    let chain = MomentChain::from_parts(
        ell,
        m,
        decode_all(&repr.lambda)?,
        decode_all(&repr.a)?,
        decode_all(&repr.b)?,
    )?;
    Ok(chain)
        .map(Some)
}

/// Builds the chain, consulting an in-process memo first and then the
/// cache directory given by `QEXPR_CACHE_DIR` when it is set. A failed
/// cache write is not fatal (the freshly built chain is still returned);
/// a corrupt cache file is.
pub fn cached_chain(ell: usize, m: usize) -> Result<MomentChain> {
    use std::collections::HashMap;
    use std::sync::{Mutex, OnceLock};
    static MEMO: OnceLock<Mutex<HashMap<(usize, usize), MomentChain>>> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(chain) = memo.lock().unwrap().get(&(ell, m)) {
        return Ok(chain.clone());
    }
    let chain = match cache_dir_from_env() {
        Some(dir) => match load_chain(&dir, ell, m)? {
            Some(chain) => chain,
            None => {
                let chain = MomentChain::build(ell, m)?;
                let _ = store_chain(&dir, &chain);
                chain
            }
        },
        None => MomentChain::build(ell, m)?,
    };
    memo.lock().unwrap().insert((ell, m), chain.clone());
    Ok(chain)
}
