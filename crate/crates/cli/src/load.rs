use std::io::Write;

use serde::Serialize;
use sha2::{Digest, Sha256};
use warpcurv::error::GeometryError;
use warpcurv::manifold::{ManifoldSpec, Point};
use warpcurv::models::{self, CatalogEntry, KnownFact};

use crate::args::{CatalogArgs, Format, ModelArgs, ValidateArgs};
use crate::error::{CliError, CliResult};

/// A resolved model: catalog entry or spec file.
pub struct Loaded {
    pub name: String,
    pub spec: ManifoldSpec,
    pub entry: Option<CatalogEntry>,
}

impl Loaded {
    pub fn spec_hash(&self) -> CliResult<String> {
        let json = self.spec.to_json()?;
        let digest = Sha256::digest(json.as_bytes());
        Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
    }
}

pub fn load(args: &ModelArgs) -> CliResult<Loaded> {
    if let Some(path) = &args.spec {
        let text = std::fs::read_to_string(path)?;
        let spec = ManifoldSpec::from_json(&text)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "spec".into());
        return Ok(Loaded {
            name,
            spec,
            entry: None,
        });
    }
    let name = args
        .model
        .as_deref()
        .ok_or_else(|| CliError::Usage("a model name or --spec is required".into()))?;
    let entry = match (name, args.mass) {
        ("schwarzschild_exterior", Some(m)) => {
            if !(m > 0.0 && m.is_finite()) {
                return Err(GeometryError::Validation(format!("mass must be positive, got {m}")).into());
            }
            models::schwarzschild_exterior(m)?
        }
        (_, Some(_)) => return Err(CliError::Usage("--mass only applies to schwarzschild_exterior".into())),
        _ => models::entry(name)?,
    };
    Ok(Loaded {
        name: entry.name.to_string(),
        spec: entry.spec.clone(),
        entry: Some(entry),
    })
}

/// Parses `name=value,...` over the default point.
pub fn parse_point(spec: &ManifoldSpec, text: Option<&str>) -> CliResult<Point> {
    let p = spec.default_point();
    let Some(text) = text.filter(|t| !t.trim().is_empty()) else {
        spec.check_point(&p)?;
        return Ok(p);
    };
    let names = spec.coordinate_names();
    let mut flat = spec.flatten_point(&p)?;
    for item in text.split(',') {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expected name=value, got '{item}'")))?;
        let k = k.trim();
        let idx = names.iter().position(|n| n == k).ok_or_else(|| {
            CliError::Usage(format!(
                "unknown coordinate '{k}'; coordinates are {}",
                names.join(", ")
            ))
        })?;
        flat[idx] = v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("cannot parse '{v}' as a number")))?;
    }
    let p = spec.split_point(&flat)?;
    spec.check_point(&p)?;
    Ok(p)
}

#[derive(Serialize)]
struct CatalogItem<'a> {
    name: &'a str,
    description: &'a str,
    spec: serde_json::Value,
    known_facts: &'a [KnownFact],
}

pub fn catalog_cmd(args: &CatalogArgs, out: &mut dyn Write) -> CliResult<i32> {
    let entries = models::catalog();
    match args.format {
        Format::Json => {
            let items = entries
                .iter()
                .map(|e| {
                    Ok(CatalogItem {
                        name: e.name,
                        description: e.description,
                        spec: serde_json::from_str(&e.spec.to_json()?)?,
                        known_facts: &e.known_facts,
                    })
                })
                .collect::<CliResult<Vec<_>>>()?;
            serde_json::to_writer_pretty(&mut *out, &items)?;
            writeln!(out)?;
        }
        Format::Csv => {
            writeln!(out, "name,kind,dimension,description")?;
            for e in &entries {
                writeln!(
                    out,
                    "{},{},{},\"{}\"",
                    e.name,
                    e.spec.kind,
                    e.spec.total_dim(),
                    e.description
                )?;
            }
        }
        Format::Text => {
            for e in &entries {
                writeln!(out, "{:<38} {:<6} {}", e.name, e.spec.kind.to_string(), e.description)?;
            }
        }
    }
    Ok(0)
}

pub fn export_cmd(args: &ModelArgs, out: &mut dyn Write) -> CliResult<i32> {
    let m = load(args)?;
    writeln!(out, "{}", m.spec.to_json()?)?;
    Ok(0)
}

pub fn validate_cmd(args: &ValidateArgs, out: &mut dyn Write) -> CliResult<i32> {
    let m = load(&args.model)?;
    let entry = m
        .entry
        .ok_or_else(|| CliError::Usage("validate needs a catalog model with known facts".into()))?;
    let report = models::validate_entry(&entry, args.seed);
    serde_json::to_writer_pretty(&mut *out, &report)?;
    writeln!(out)?;
    Ok(if report.all_pass() { 0 } else { 1 })
}
