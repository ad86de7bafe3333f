//! File formats: JSON objects, share files, and CSV arrays with the field
//! echoed in a leading comment line.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use geoshare::access::AccessDescriptor;
use geoshare::array::RepresentativeArray;
use geoshare::field::{FieldSpec, Repr};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn to_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// A scheme file read without the generator invariants, so that corrupted
/// files (a zero column, say) still reach the verifiers.
#[derive(Deserialize)]
pub struct RawScheme {
    pub field: FieldSpec,
    pub k: Option<usize>,
    pub dealer: Vec<Repr>,
    pub participants: Vec<Vec<Repr>>,
    pub labels: Option<Vec<String>>,
    pub access: AccessDescriptor,
}

impl RawScheme {
    pub fn check_shape(&self) -> Result<()> {
        let k = self.dealer.len();
        if k == 0 {
            bail!("dealer column is empty");
        }
        if let Some(stated) = self.k {
            if stated != k {
                bail!("k = {stated} but the dealer column has {k} entries");
            }
        }
        if let Some(i) = self.participants.iter().position(|v| v.len() != k) {
            bail!("participant column {} has {} entries, expected {k}", i + 1, self.participants[i].len());
        }
        if let Some(&e) = self.dealer.iter().chain(self.participants.iter().flatten()).find(|&&e| !self.field.contains(e)) {
            bail!("entry {e} is not an element of {}", self.field);
        }
        if let Some(l) = &self.labels {
            if l.len() != self.participants.len() {
                bail!("{} labels for {} participants", l.len(), self.participants.len());
            }
        }
        Ok(())
    }

    pub fn labels(&self) -> Vec<String> {
        self.labels.clone().unwrap_or_else(|| (1..=self.participants.len()).map(|i| format!("P{i}")).collect())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShareFile {
    pub label: String,
    pub index: usize,
    pub value: Repr,
    pub field: FieldSpec,
}

/// Share files hold either one share or a list of them.
pub fn read_shares(path: &Path) -> Result<Vec<ShareFile>> {
    let value: serde_json::Value = read_json(path)?;
    let parsed = if value.is_array() {
        serde_json::from_value(value)
    } else {
        serde_json::from_value::<ShareFile>(value).map(|s| vec![s])
    };
    parsed.with_context(|| format!("parsing shares in {}", path.display()))
}

const FIELD_PREFIX: &str = "# field ";

pub fn array_to_csv(m: &RepresentativeArray) -> Result<String> {
    let mut out = format!("{FIELD_PREFIX}{}\n", serde_json::to_string(m.spec())?);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(m.labels())?;
    for row in m.rows() {
        w.write_record(row.iter().map(|e| e.to_string()))?;
    }
    out.push_str(&String::from_utf8(w.into_inner()?)?);
    Ok(out)
}

/// JSON array files or CSV with a `# field {...}` line; `field` overrides
/// or supplies the field for CSV input.
pub fn read_array(path: &Path, field: Option<&FieldSpec>) -> Result<RepresentativeArray> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if text.trim_start().starts_with('{') {
        return serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()));
    }
    let mut spec = field.cloned();
    let mut body = text.as_str();
    if let Some(rest) = text.strip_prefix(FIELD_PREFIX) {
        let (line, tail) = rest.split_once('\n').unwrap_or((rest, ""));
        let stated: FieldSpec = serde_json::from_str(line).context("parsing the field line")?;
        if let Some(given) = &spec {
            if *given != stated {
                bail!("--q field {given} differs from the file's {stated}");
            }
        }
        spec = Some(stated);
        body = tail;
    }
    let spec = spec.context("CSV array has no field line; pass --q")?;
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let labels: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        rows.push(rec.iter().map(|s| s.trim().parse::<Repr>()).collect::<Result<Vec<_>, _>>().context("array entries must be integers")?);
    }
    Ok(RepresentativeArray::new(&spec, labels, rows)?)
}
