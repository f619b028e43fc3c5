//! Experiment configuration, read from TOML.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::field::FieldChoice;
use crate::LabError;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// `Q` or `Fp(u):p`.
    pub field: String,
    #[serde(default)]
    pub family: Option<FamilySpec>,
    #[serde(default)]
    pub sampling: SamplingSpec,
    #[serde(default)]
    pub depth: DepthSpec,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub s5: S5Spec,
    #[serde(default)]
    pub divisors: Option<DivisorSpec>,
}

/// `y^2 = x^3 + a(s) x + b(s)` with an optional section, as expressions in `s`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub a: String,
    pub b: String,
    #[serde(default)]
    pub section: Option<[String; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct SamplingSpec {
    /// `H(s) <= B` over `Q`, `deg s <= B` over `F_p(u)`.
    pub height_bound: u64,
    pub fibers: usize,
    /// Points `[N] section` for `1 <= N <= n_max`.
    pub n_max: i64,
    pub seed: u64,
}

impl Default for SamplingSpec {
    fn default() -> Self {
        Self {
            height_bound: 10,
            fibers: 20,
            n_max: 3,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct DepthSpec {
    /// Depth of the canonical-height estimate.
    pub m: u32,
    /// Deepest level of the convergence tables.
    pub l_max: u32,
}

impl Default for DepthSpec {
    fn default() -> Self {
        Self { m: 6, l_max: 7 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    pub dir: PathBuf,
    /// Calibration fixtures; relative paths resolve against `dir`.
    pub calibration: PathBuf,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            calibration: PathBuf::from("calibration.json"),
        }
    }
}

/// `(coefficient, exponent vector)`.
pub type TermSpec = (i64, Vec<u32>);

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MorphismConfig {
    pub name: String,
    /// Dimensions of the source factors.
    pub source: Vec<usize>,
    pub forms: Vec<Vec<TermSpec>>,
    #[serde(default)]
    pub vanishes: Vec<Vec<TermSpec>>,
    /// Each entry is a set of forms that must not vanish simultaneously.
    #[serde(default)]
    pub not_all_vanish: Vec<Vec<Vec<TermSpec>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct S5Spec {
    pub samples: usize,
    /// Coordinates drawn from `[-bound, bound]` (`Q`) or of degree at most
    /// `bound` (`F_p(u)`).
    pub coord_bound: u64,
    pub veronese: Vec<u32>,
    pub segre: bool,
    pub identity: bool,
    pub blowup: bool,
    pub morphisms: Vec<MorphismConfig>,
}

impl Default for S5Spec {
    fn default() -> Self {
        Self {
            samples: 500,
            coord_bound: 1000,
            veronese: vec![2, 3],
            segre: true,
            identity: true,
            blowup: true,
            morphisms: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DivisorSpec {
    /// 1 or 2.
    pub ambient: usize,
    /// Registered forms in order of declaration.
    pub forms: Vec<NamedForm>,
    pub divisor: BTreeMap<String, i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct NamedForm {
    pub id: String,
    pub terms: Vec<TermSpec>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, LabError> {
        let cfg: Self = toml::from_str(text).map_err(|e| LabError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, LabError> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// A config with only a field, for commands that need nothing else.
    pub fn bare(field: FieldChoice) -> Self {
        Self {
            field: field.to_string(),
            family: None,
            sampling: SamplingSpec::default(),
            depth: DepthSpec::default(),
            output: OutputSpec::default(),
            s5: S5Spec::default(),
            divisors: None,
        }
    }

    pub fn validate(&self) -> Result<(), LabError> {
        self.field_choice()?;
        let bad = |m: &str| Err(LabError::Config(m.to_string()));
        if self.sampling.height_bound < 1 {
            return bad("sampling.height_bound must be at least 1");
        }
        if self.sampling.fibers < 1 {
            return bad("sampling.fibers must be at least 1");
        }
        if self.sampling.n_max < 1 {
            return bad("sampling.n_max must be at least 1");
        }
        let max = height_core::neron_tate::MAX_DEPTH;
        if !(1..=max).contains(&self.depth.m) || !(1..=max).contains(&self.depth.l_max) {
            return Err(LabError::Config(format!("depth.m and depth.l_max must lie in 1..={max}")));
        }
        if self.s5.samples < 1 {
            return bad("s5.samples must be at least 1");
        }
        Ok(())
    }

    pub fn field_choice(&self) -> Result<FieldChoice, LabError> {
        self.field.parse()
    }

    pub fn family(&self) -> Result<&FamilySpec, LabError> {
        self.family
            .as_ref()
            .ok_or_else(|| LabError::Config("config has no [family] section".into()))
    }

    pub fn calibration_path(&self) -> PathBuf {
        self.output.dir.join(&self.output.calibration)
    }

    /// SHA-256 of the canonical JSON form of everything but the output
    /// section, so moving the output does not change the hash.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output = OutputSpec::default();
        let json = serde_json::to_string(&c).expect("config serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
field = "Q"

[family]
a = "s"
b = "1"
section = ["0", "1"]

[sampling]
height_bound = 100
fibers = 200
n_max = 5
seed = 7

[depth]
m = 6
l_max = 7

[[s5.morphisms]]
name = "square"
source = [1]
forms = [[[1, [2, 0]]], [[1, [1, 1]]], [[1, [0, 2]]]]

[divisors]
ambient = 1
forms = [{ id = "x", terms = [[1, [1, 0]]] }, { id = "y", terms = [[1, [0, 1]]] }]
divisor = { x = 2, y = -1 }
"#;

    #[test]
    fn parses_the_full_schema() {
        let c = ExperimentConfig::from_toml(SAMPLE).unwrap();
        assert_eq!(c.family().unwrap().section.as_ref().unwrap()[1], "1");
        assert_eq!(c.sampling.fibers, 200);
        assert_eq!(c.s5.morphisms[0].forms[1], vec![(1, vec![1, 1])]);
        assert_eq!(c.divisors.as_ref().unwrap().divisor["y"], -1);
        assert_eq!(c.s5.samples, 500);
    }

    #[test]
    fn hash_ignores_output_but_not_seed() {
        let a = ExperimentConfig::from_toml(SAMPLE).unwrap();
        let mut b = a.clone();
        b.output.dir = PathBuf::from("elsewhere");
        assert_eq!(a.hash(), b.hash());
        b.sampling.seed = 8;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        for bad in [
            SAMPLE.replace("height_bound = 100", "height_bound = 0"),
            SAMPLE.replace("fibers = 200", "fibers = 0"),
            SAMPLE.replace("m = 6", "m = 11"),
            SAMPLE.replace("field = \"Q\"", "field = \"Fp(u):4\""),
            SAMPLE.replace("seed = 7", "seed = 7\nbogus = 1"),
        ] {
            assert!(matches!(ExperimentConfig::from_toml(&bad), Err(LabError::Config(_))));
        }
    }
}
