//! Document plumbing: commands read either a bare instance or a bundle
//! carrying an instance plus optional network and schedule.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use serde_json::Value;

use gossipnet_core::model::{Instance, Network};
use gossipnet_core::stability::Defection;
use gossipnet_core::{Error, Result};

pub struct Document {
    pub instance: Instance,
    pub network: Option<Network>,
    pub schedule: Option<Vec<Defection>>,
}

pub fn read_input(path: &Option<PathBuf>) -> Result<String> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
            Ok(buf)
        }
    }
}

pub fn parse_document(text: &str) -> Result<Document> {
    let value: Value = serde_json::from_str(text)?;
    if value.get("instance").is_some() {
        let instance = Instance::from_json(&value["instance"].to_string())?;
        let network = match value.get("network") {
            Some(v) if !v.is_null() => Some(Network::from_json(&v.to_string())?),
            _ => None,
        };
        let schedule = match value.get("schedule") {
            Some(v) if !v.is_null() => Some(parse_schedule_value(v)?),
            _ => None,
        };
        Ok(Document {
            instance,
            network,
            schedule,
        })
    } else {
        Ok(Document {
            instance: Instance::from_json(text)?,
            network: None,
            schedule: None,
        })
    }
}

pub fn read_document(path: &Option<PathBuf>) -> Result<Document> {
    parse_document(&read_input(path)?)
}

pub fn read_network(path: &Path) -> Result<Network> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    Network::from_json(&text)
}

/// A schedule file is either `{"moves": [...]}` or a bare move array.
pub fn parse_schedule_value(value: &Value) -> Result<Vec<Defection>> {
    let moves_value = value.get("moves").unwrap_or(value);
    serde_json::from_value(moves_value.clone()).map_err(Error::from)
}

pub fn read_schedule(path: &Path) -> Result<Vec<Defection>> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)?;
    parse_schedule_value(&value)
}

pub fn schedule_to_json(schedule: &[Defection]) -> String {
    serde_json::json!({ "moves": schedule }).to_string()
}

pub fn write_or_print(text: &str, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(p) => {
            fs::write(p, text).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}
