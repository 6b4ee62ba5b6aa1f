use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;

use serde::Serialize;
use serde_json::Value;

use crate::args::SWITCHES;

/// Appends `--key value` for every config-file entry whose flag is missing
/// from `argv`, so the command line wins and clap validates the rest.
pub fn merge_config(argv: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let strs: Vec<String> = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let path = strs.iter().enumerate().find_map(|(i, a)| {
        if a == "--config" {
            strs.get(i + 1).cloned()
        } else {
            a.strip_prefix("--config=").map(str::to_string)
        }
    });
    let Some(path) = path else { return Ok(argv) };
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config '{path}': {e}"))?;
    let pairs = qsmote::io::parse_kv(&text).map_err(|e| format!("config '{path}': {e}"))?;

    let mut out = argv;
    for (key, value) in pairs {
        let name = key.replace('_', "-");
        if name == "config" {
            return Err(format!("config '{path}': a config file cannot name another"));
        }
        let flag = format!("--{name}");
        let given = strs.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if given {
            continue;
        }
        if SWITCHES.contains(&name.as_str()) {
            match value.as_str() {
                "true" => out.push(flag.into()),
                "false" => {}
                _ => return Err(format!("config '{path}': {key} takes true or false")),
            }
        } else {
            out.push(format!("{flag}={value}").into());
        }
    }
    Ok(out)
}

/// Flattens parsed arguments into the `key → value` map stored in run reports.
pub fn resolved<T: Serialize>(args: &T) -> BTreeMap<String, String> {
    let mut map = BTreeMap::new();
    if let Ok(Value::Object(obj)) = serde_json::to_value(args) {
        for (k, v) in obj {
            let text = match v {
                Value::Null => continue,
                Value::String(s) => s,
                Value::Array(items) => items
                    .iter()
                    .map(|i| i.as_str().map_or_else(|| i.to_string(), str::to_string))
                    .collect::<Vec<_>>()
                    .join(","),
                other => other.to_string(),
            };
            map.insert(k, text);
        }
    }
    map
}
