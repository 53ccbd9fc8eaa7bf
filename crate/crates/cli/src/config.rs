//! Flat `key = value` config files, spliced into argv ahead of the user's flags.

use std::ffi::OsString;

use clap::{ArgAction, CommandFactory};

use crate::args::Cli;

#[derive(Debug)]
pub struct ConfigError(pub String);

/// Returns `argv` with `--config PATH` replaced by the file's entries.
///
/// Entries go right after the subcommand name so that later flags on the
/// command line override them.
pub fn expand(argv: Vec<OsString>) -> Result<Vec<OsString>, ConfigError> {
    let Some(sub_pos) = argv.iter().skip(1).position(|a| !a.to_string_lossy().starts_with('-')) else {
        return Ok(argv);
    };
    let sub_pos = sub_pos + 1;
    let mut rest = Vec::new();
    let mut path = None;
    let mut it = argv[sub_pos + 1..].iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            match it.next() {
                Some(p) => path = Some(p.clone()),
                None => return Err(ConfigError("--config needs a path".into())),
            }
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(OsString::from(p));
        } else {
            rest.push(a.clone());
        }
    }
    let Some(path) = path else {
        return Ok(argv);
    };
    let sub_name = argv[sub_pos].to_string_lossy().into_owned();
    let text = std::fs::read_to_string(&path)
        .map_err(|e| ConfigError(format!("--config {}: {e}", path.to_string_lossy())))?;
    let injected = injected_flags(&sub_name, &text)?;
    let mut out: Vec<OsString> = argv[..=sub_pos].to_vec();
    out.extend(injected.into_iter().map(OsString::from));
    out.extend(rest);
    Ok(out)
}

fn injected_flags(sub_name: &str, text: &str) -> Result<Vec<String>, ConfigError> {
    let cmd = Cli::command();
    let Some(sub) = cmd.find_subcommand(sub_name) else {
        // clap reports the unknown subcommand.
        return Ok(Vec::new());
    };
    let mut flags = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError(format!("config line {}: expected key = value", lineno + 1)));
        };
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        let arg = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()))
            .filter(|_| key != "config" && key != "help");
        let Some(arg) = arg else {
            return Err(ConfigError(format!("unknown config key '{key}' for {sub_name}")));
        };
        if matches!(arg.get_action(), ArgAction::SetTrue) {
            match value {
                "true" | "1" | "yes" => flags.push(format!("--{key}")),
                "false" | "0" | "no" => {}
                _ => return Err(ConfigError(format!("config key '{key}' expects true or false"))),
            }
        } else {
            flags.push(format!("--{key}={value}"));
        }
    }
    Ok(flags)
}
