//! Run configuration, read from a TOML file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use staircase_core::curves::CurveSpec;
use staircase_core::engine::ExponentTriple;
use staircase_core::intervals::Hypothesis;
use staircase_core::whitney::DiagonalModel;

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub curve: CurveSection,
    pub sequence: SequenceSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub hypothesis: HypothesisSection,
    #[serde(default)]
    pub symbol: SymbolSection,
    #[serde(default)]
    pub apply: ApplySection,
    #[serde(default)]
    pub probe: ProbeSection,
    #[serde(default)]
    pub whitney: WhitneySection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSection {
    pub family: String,
    pub c: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceSection {
    #[serde(rename = "J")]
    pub j: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub l: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        Self { n: 256, l: 32.0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HypothesisSection {
    pub which: String,
}

impl Default for HypothesisSection {
    fn default() -> Self {
        Self { which: "hyp1".into() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SymbolSection {
    /// staircase, epigraph, polygonal, exponential, ones
    pub kind: String,
    pub nx: usize,
    pub ny: usize,
    /// `[xi_lo, xi_hi, eta_lo, eta_hi]`; defaults to the symbol's bounding box.
    pub window: Option<[f64; 4]>,
}

impl Default for SymbolSection {
    fn default() -> Self {
        Self { kind: "staircase".into(), nx: 512, ny: 512, window: None }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct ApplySection {
    pub f: Option<PathBuf>,
    pub g: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProbeSection {
    pub trials: usize,
    pub resolutions: Vec<usize>,
    pub band: f64,
    pub triples: Vec<[f64; 3]>,
    pub threshold: f64,
}

impl Default for ProbeSection {
    fn default() -> Self {
        Self { trials: 200, resolutions: vec![128, 256, 512], band: 2.0, triples: vec![[3.0, 3.0, 3.0]], threshold: 1.5 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WhitneySection {
    #[serde(rename = "C0")]
    pub c0: u32,
    pub alpha: f64,
    #[serde(rename = "B")]
    pub base: u32,
    pub lattice_shift: u32,
    pub depth: u32,
    pub samples: usize,
    /// Highest segment index covered; segments `0..=j_max`.
    pub j_max: usize,
    pub diagonal: String,
    pub kernel_width: f64,
    pub partition_scales: Vec<u32>,
    pub model_rects: usize,
    pub model_groups: Vec<usize>,
    pub tolerance: f64,
    /// Number of coarsest scales per triangle written to rects.csv and rects.svg.
    pub export_scales: u32,
}

impl Default for WhitneySection {
    fn default() -> Self {
        Self {
            c0: 16,
            alpha: 0.9,
            base: 8,
            lattice_shift: 1,
            depth: 4,
            samples: 10_000,
            j_max: 6,
            diagonal: "plane".into(),
            kernel_width: 2.0,
            partition_scales: vec![0, 1],
            model_rects: 8,
            model_groups: vec![0, 1],
            tolerance: 1e-6,
            export_scales: 1,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
}

/// A parsed configuration plus the facts every report records about it.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub cfg: RunConfig,
    pub seed: u64,
    /// SHA-256 of the config file bytes.
    pub hash: String,
    pub base_dir: PathBuf,
}

impl Loaded {
    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }
}

pub fn load(path: &Path, seed_override: Option<u64>) -> Result<Loaded, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
    parse(&bytes, path.parent().unwrap_or(Path::new(".")), seed_override)
}

pub fn parse(bytes: &[u8], base_dir: &Path, seed_override: Option<u64>) -> Result<Loaded, CliError> {
    let text = std::str::from_utf8(bytes).map_err(|_| CliError::Config("config is not UTF-8".into()))?;
    let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    let seed = seed_override
        .or(cfg.seed)
        .ok_or_else(|| CliError::Config("seed is required (top-level `seed = ...` or --seed)".into()))?;
    validate(&cfg)?;
    let hash = Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect();
    Ok(Loaded { cfg, seed, hash, base_dir: base_dir.to_path_buf() })
}

fn validate(cfg: &RunConfig) -> Result<(), CliError> {
    let bad = |m: String| Err(CliError::Config(m));
    if cfg.sequence.j < 3 {
        return bad("J ≥ 3 required".into());
    }
    if cfg.grid.n < 2 || !cfg.grid.n.is_power_of_two() {
        return bad(format!("grid N must be a power of two, got {}", cfg.grid.n));
    }
    if !(cfg.grid.l.is_finite() && cfg.grid.l > 0.0) {
        return bad(format!("grid L must be positive, got {}", cfg.grid.l));
    }
    curve(cfg)?;
    hypothesis(cfg)?;
    triples(cfg)?;
    diagonal(cfg)?;
    if cfg.symbol.nx == 0 || cfg.symbol.ny == 0 {
        return bad("symbol nx and ny must be positive".into());
    }
    if cfg.probe.resolutions.iter().any(|n| *n < 2 || !n.is_power_of_two()) {
        return bad("probe resolutions must be powers of two".into());
    }
    let w = &cfg.whitney;
    if !(w.alpha > 0.0 && w.alpha < 1.0) {
        return bad(format!("whitney alpha must lie in (0, 1), got {}", w.alpha));
    }
    if w.c0 == 0 || w.base == 0 {
        return bad("whitney C0 and B must be positive".into());
    }
    Ok(())
}

pub fn curve(cfg: &RunConfig) -> Result<CurveSpec, CliError> {
    let c = cfg.curve.c;
    let need = |name: &str| c.ok_or_else(|| CliError::Config(format!("curve family {name} needs parameter c")));
    let spec = match cfg.curve.family.as_str() {
        "power_law" => CurveSpec::power_law(need("power_law")?),
        "hyperboloid" => Ok(CurveSpec::hyperboloid()),
        "exponential" => Ok(CurveSpec::exponential()),
        "monomial" => CurveSpec::monomial(need("monomial")?),
        "circle_arc" => Ok(CurveSpec::circle_arc()),
        "rational" => CurveSpec::rational(need("rational")?),
        "arctan" => Ok(CurveSpec::arctan()),
        other => return Err(CliError::Config(format!("unknown curve family `{other}`"))),
    };
    spec.map_err(|e| CliError::Config(e.to_string()))
}

pub fn hypothesis(cfg: &RunConfig) -> Result<Hypothesis, CliError> {
    match cfg.hypothesis.which.as_str() {
        "hyp1" => Ok(Hypothesis::Hyp1),
        "hyp2" => Ok(Hypothesis::Hyp2),
        other => Err(CliError::Config(format!("hypothesis must be hyp1 or hyp2, got `{other}`"))),
    }
}

pub fn triples(cfg: &RunConfig) -> Result<Vec<ExponentTriple>, CliError> {
    cfg.probe
        .triples
        .iter()
        .map(|t| ExponentTriple::new(t[0], t[1], t[2]).map_err(|e| CliError::Config(e.to_string())))
        .collect()
}

pub fn diagonal(cfg: &RunConfig) -> Result<DiagonalModel, CliError> {
    match cfg.whitney.diagonal.as_str() {
        "plane" => Ok(DiagonalModel::Plane),
        "line" => Ok(DiagonalModel::Line),
        other => Err(CliError::Config(format!("whitney diagonal must be plane or line, got `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "seed = 7\n[curve]\nfamily = \"hyperboloid\"\n[sequence]\nJ = 6\n";

    #[test]
    fn minimal_config_gets_defaults() {
        let l = parse(MINIMAL.as_bytes(), Path::new("."), None).unwrap();
        assert_eq!(l.seed, 7);
        assert_eq!(l.cfg.grid.n, 256);
        assert_eq!(l.cfg.whitney.c0, 16);
        assert_eq!(l.hash.len(), 64);
    }

    #[test]
    fn seed_flag_overrides() {
        assert_eq!(parse(MINIMAL.as_bytes(), Path::new("."), Some(9)).unwrap().seed, 9);
        let unseeded = MINIMAL.replace("seed = 7\n", "");
        assert!(matches!(parse(unseeded.as_bytes(), Path::new("."), None), Err(CliError::Config(_))));
        assert_eq!(parse(unseeded.as_bytes(), Path::new("."), Some(1)).unwrap().seed, 1);
    }

    #[test]
    fn rejects_short_truncation_and_bad_fields() {
        let short = MINIMAL.replace("J = 6", "J = 2");
        match parse(short.as_bytes(), Path::new("."), None) {
            Err(CliError::Config(m)) => assert_eq!(m, "J ≥ 3 required"),
            other => panic!("{other:?}"),
        }
        for (from, to) in [
            ("family = \"hyperboloid\"", "family = \"parabola\""),
            ("family = \"hyperboloid\"", "family = \"power_law\""),
            ("J = 6", "J = 6\nK = 1"),
            ("J = 6\n", "J = 6\n[grid]\nN = 100\nL = 1.0\n"),
            ("J = 6\n", "J = 6\n[probe]\ntriples = [[3.0, 3.0, 2.0]]\n"),
            ("J = 6\n", "J = 6\n[whitney]\nalpha = 1.5\n"),
        ] {
            let text = MINIMAL.replace(from, to);
            assert!(matches!(parse(text.as_bytes(), Path::new("."), None), Err(CliError::Config(_))), "{text}");
        }
    }

    #[test]
    fn hash_tracks_bytes() {
        let a = parse(MINIMAL.as_bytes(), Path::new("."), None).unwrap().hash;
        let b = parse(format!("{MINIMAL}\n").as_bytes(), Path::new("."), None).unwrap().hash;
        assert_ne!(a, b);
    }
}
