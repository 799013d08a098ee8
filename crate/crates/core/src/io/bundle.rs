use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{parse_alist, parse_dense, toml_error, write_alist, write_dense};
use crate::automorphism::Construction;
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;

pub const MANIFEST_FILE: &str = "manifest.toml";

/// Key-value summary stored next to the matrices of a constructed code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub n: usize,
    pub k: usize,
    /// Requested excess weight of the sampled matrix.
    pub delta: usize,
    pub seed: u64,
    pub omega_t: usize,
    pub omega_t_inv: usize,
    pub omega_t2: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_distance: Option<usize>,
    #[serde(default)]
    pub attempts: usize,
    #[serde(default)]
    pub ordering_failures: usize,
    #[serde(default)]
    pub reduction_failures: usize,
    #[serde(default)]
    pub block_sizes: Vec<usize>,
    #[serde(default)]
    pub frozen_positions: Vec<usize>,
}

impl Manifest {
    pub fn from_construction(c: &Construction, delta: usize, seed: u64) -> Self {
        let r = &c.report;
        Manifest {
            n: c.code.n(),
            k: c.code.k(),
            delta,
            seed,
            omega_t: r.omega_t,
            omega_t_inv: r.omega_t_inv,
            omega_t2: r.omega_t2,
            min_distance: r.min_distance,
            attempts: r.attempts,
            ordering_failures: r.ordering_failures,
            reduction_failures: r.reduction_failures,
            block_sizes: r.block_sizes.clone(),
            frozen_positions: r.frozen_positions.clone(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| toml_error(text, e))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("manifest fields are plain values")
    }
}

/// Matrices read back from a bundle directory.
#[derive(Debug, Clone)]
pub struct Bundle {
    pub h: BitMatrix,
    /// `H` as stored in alist form, when present.
    pub h_alist: Option<BitMatrix>,
    pub t: BitMatrix,
    pub t_inv: Option<BitMatrix>,
    pub t2: Option<BitMatrix>,
    pub a: Option<BitMatrix>,
    pub manifest: Option<Manifest>,
}

/// Writes `H.alist`, `H.txt`, `T.txt`, `Tinv.txt`, `T2.txt`, `A.txt` and the
/// manifest into `dir`, creating it if needed.
pub fn write_bundle(dir: &Path, c: &Construction, manifest: &Manifest) -> Result<()> {
    fs::create_dir_all(dir)?;
    let aut = &c.automorphism;
    fs::write(dir.join("H.alist"), write_alist(c.code.h()))?;
    fs::write(dir.join("H.txt"), write_dense(c.code.h()))?;
    fs::write(dir.join("T.txt"), write_dense(aut.t()))?;
    fs::write(dir.join("Tinv.txt"), write_dense(aut.t_inv()))?;
    fs::write(dir.join("T2.txt"), write_dense(aut.power(2).t()))?;
    fs::write(dir.join("A.txt"), write_dense(c.ccm.a()))?;
    fs::write(dir.join(MANIFEST_FILE), manifest.to_toml())?;
    Ok(())
}

fn read_optional<T>(path: &Path, parse: impl Fn(&str) -> Result<T>) -> Result<Option<T>> {
    match fs::read_to_string(path) {
        Ok(text) => parse(&text).map(Some).map_err(|e| with_file(path, e)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn with_file(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse { line, msg } => Error::Parse {
            line,
            msg: format!("{}: {msg}", path.display()),
        },
        other => other,
    }
}

/// Reads a bundle. `H` comes from `H.txt`, or `H.alist` if the dense file is
/// missing; `T.txt` is required.
pub fn read_bundle(dir: &Path) -> Result<Bundle> {
    let h_dense = read_optional(&dir.join("H.txt"), parse_dense)?;
    let h_alist = read_optional(&dir.join("H.alist"), parse_alist)?;
    let h = match (h_dense, &h_alist) {
        (Some(h), _) => h,
        (None, Some(h)) => h.clone(),
        (None, None) => {
            return Err(Error::InvalidParameter(format!(
                "{} contains neither H.txt nor H.alist",
                dir.display()
            )))
        }
    };
    let t = read_optional(&dir.join("T.txt"), parse_dense)?
        .ok_or_else(|| Error::InvalidParameter(format!("{} has no T.txt", dir.display())))?;
    Ok(Bundle {
        h,
        h_alist,
        t,
        t_inv: read_optional(&dir.join("Tinv.txt"), parse_dense)?,
        t2: read_optional(&dir.join("T2.txt"), parse_dense)?,
        a: read_optional(&dir.join("A.txt"), parse_dense)?,
        manifest: read_optional(&dir.join(MANIFEST_FILE), Manifest::parse)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::construct_code_with_automorphism;

    #[test]
    fn bundle_round_trip() {
        let c = construct_code_with_automorphism(12, 6, 2, 1, 100).unwrap();
        let m = Manifest::from_construction(&c, 2, 1);
        let dir = tempfile::tempdir().unwrap();
        write_bundle(dir.path(), &c, &m).unwrap();
        let b = read_bundle(dir.path()).unwrap();
        assert_eq!(&b.h, c.code.h());
        assert_eq!(b.h_alist.as_ref(), Some(c.code.h()));
        assert_eq!(&b.t, c.automorphism.t());
        assert_eq!(b.t_inv.as_ref(), Some(c.automorphism.t_inv()));
        assert_eq!(b.a.as_ref(), Some(c.ccm.a()));
        assert_eq!(b.manifest, Some(m));
    }

    #[test]
    fn manifest_errors_carry_lines() {
        let bad = "n = 7\nk = 4\ndelta = \"x\"\n";
        match Manifest::parse(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(Manifest::parse("n = 7\nbogus = 1\n").is_err());
    }

    #[test]
    fn missing_files_reported() {
        let dir = tempfile::tempdir().unwrap();
        assert!(read_bundle(dir.path()).is_err());
        fs::write(dir.path().join("H.txt"), "1 2\n11\n").unwrap();
        assert!(read_bundle(dir.path()).is_err());
        fs::write(dir.path().join("T.txt"), "2 2\n10\n01\n").unwrap();
        let b = read_bundle(dir.path()).unwrap();
        assert!(b.a.is_none() && b.manifest.is_none());
    }
}
