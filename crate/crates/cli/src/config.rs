use anyhow::{anyhow, bail, Context, Result};
use building::{FiltrationSpec, MAX_TREE_RADIUS};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use padic_analysis::SeriesShape;
use padic_core::PadicCtx;

pub const PRECISION_ENV: &str = "BTKIT_PRECISION";
pub const SEED_ENV: &str = "BTKIT_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Dot,
}

/// Everything a command run depends on. Two runs with equal configs print
/// byte-identical JSON: all arithmetic is exact and the only randomness is
/// the seeded generator handed to the property suites.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub p: u32,
    pub precision: u32,
    pub truncation: u32,
    pub e: u32,
    pub radius: u32,
    pub r_exponents: Vec<BigRational>,
    pub format: OutputFormat,
    pub seed: u64,
    pub samples: Option<usize>,
}

impl RunConfig {
    pub fn new(
        p: u32,
        precision: Option<u32>,
        truncation: u32,
        radius: u32,
        r_exponents: &str,
        format: OutputFormat,
        seed: Option<u64>,
        samples: Option<usize>,
    ) -> Result<RunConfig> {
        let precision = match precision {
            Some(n) => n,
            None => env_u32(PRECISION_ENV)?.unwrap_or(12),
        };
        let seed = match seed {
            Some(s) => s,
            None => env_u64(SEED_ENV)?.unwrap_or(0),
        };
        let cfg = RunConfig {
            p,
            precision,
            truncation,
            e: 2,
            radius,
            r_exponents: parse_r_exponents(r_exponents)?,
            format,
            seed,
            samples,
        };
        cfg.ctx()?;
        if cfg.radius > MAX_TREE_RADIUS {
            bail!("radius {} exceeds the supported maximum {MAX_TREE_RADIUS}", cfg.radius);
        }
        if cfg.truncation == 0 {
            bail!("truncation must be positive");
        }
        Ok(cfg)
    }

    pub fn ctx(&self) -> Result<PadicCtx> {
        Ok(PadicCtx::new(self.p, self.precision)?)
    }

    /// The three-variable coefficient algebra of a filtration-group chart.
    pub fn shape(&self) -> Result<SeriesShape> {
        Ok(SeriesShape::new(self.ctx()?, 3, self.truncation))
    }

    /// Radius exponents as positive magnitudes: r = p^(-rho), rho in (0, 1].
    pub fn rhos(&self) -> Vec<BigRational> {
        self.r_exponents.iter().map(|q| -q).collect()
    }

    pub fn render_r(&self, rho: &BigRational) -> String {
        format!("{}^(-{})", self.p, rho)
    }

    pub fn config_json(&self) -> serde_json::Value {
        let exps: Vec<String> = self.r_exponents.iter().map(|q| q.to_string()).collect();
        serde_json::json!({
            "p": self.p,
            "precision": self.precision,
            "truncation": self.truncation,
            "radius": self.radius,
            "r_exponents": exps,
            "seed": self.seed,
        })
    }
}

fn env_u32(name: &str) -> Result<Option<u32>> {
    match std::env::var(name) {
        Ok(s) => Ok(Some(
            s.parse::<u32>()
                .with_context(|| format!("{name} must be an unsigned integer, got `{s}`"))?,
        )),
        Err(_) => Ok(None),
    }
}

fn env_u64(name: &str) -> Result<Option<u64>> {
    match std::env::var(name) {
        Ok(s) => Ok(Some(
            s.parse::<u64>()
                .with_context(|| format!("{name} must be an unsigned integer, got `{s}`"))?,
        )),
        Err(_) => Ok(None),
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| anyhow!("`{num}` is not an integer"))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| anyhow!("`{den}` is not an integer"))?;
    if d == BigInt::from(0) {
        bail!("zero denominator in `{s}`");
    }
    Ok(BigRational::new(n, d))
}

fn parse_r_exponents(s: &str) -> Result<Vec<BigRational>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let q = parse_rational(part)?;
        let minus_one = -BigRational::from(BigInt::from(1));
        if q < minus_one || !q.is_negative() {
            bail!("radius exponent {q} must lie in [-1, 0)");
        }
        out.push(q);
    }
    if out.is_empty() {
        bail!("at least one radius exponent is required");
    }
    Ok(out)
}

/// A facet of the standard apartment, written `vertex:n` or `edge:n`;
/// `edge:n` is the edge with endpoints n and n+1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FacetArg {
    Vertex(i64),
    Edge(i64),
}

impl FacetArg {
    pub fn parse(s: &str) -> Result<FacetArg> {
        let (kind, pos) = s
            .split_once(':')
            .ok_or_else(|| anyhow!("facet must be `vertex:n` or `edge:n`, got `{s}`"))?;
        let n: i64 = pos
            .trim()
            .parse()
            .map_err(|_| anyhow!("facet position `{pos}` is not an integer"))?;
        match kind.trim() {
            "vertex" => Ok(FacetArg::Vertex(n)),
            "edge" => Ok(FacetArg::Edge(n)),
            other => bail!("unknown facet kind `{other}`, expected vertex or edge"),
        }
    }

    pub fn to_spec(self, p: u32, e: u32) -> Result<FiltrationSpec> {
        Ok(match self {
            FacetArg::Vertex(n) => FiltrationSpec::standard_vertex(p, e, n)?,
            FacetArg::Edge(n) => FiltrationSpec::standard_edge(p, e, n)?,
        })
    }

    pub fn label(self) -> String {
        match self {
            FacetArg::Vertex(n) => format!("vertex:{n}"),
            FacetArg::Edge(n) => format!("edge:{n}"),
        }
    }
}
