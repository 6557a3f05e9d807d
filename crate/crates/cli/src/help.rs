//! `artin <command> --help --json`: the argument grammar as JSON.

use clap::{ArgAction, Command};
use serde_json::{json, Value};

fn describe(cmd: &Command) -> Value {
    let args: Vec<Value> = cmd
        .get_arguments()
        .filter(|a| !matches!(a.get_id().as_str(), "help" | "version"))
        .map(|a| {
            let takes_value = !matches!(a.get_action(), ArgAction::SetTrue | ArgAction::SetFalse | ArgAction::Count);
            json!({
                "name": a.get_id().as_str(),
                "long": a.get_long().map(|l| format!("--{l}")),
                "positional": a.is_positional(),
                "required": a.is_required_set(),
                "takes_value": takes_value,
                "default": a.get_default_values().iter().map(|v| v.to_string_lossy().into_owned()).collect::<Vec<_>>(),
                "help": a.get_help().map(|h| h.to_string()),
            })
        })
        .collect();
    let subcommands: Vec<Value> = cmd.get_subcommands().filter(|c| c.get_name() != "help").map(describe).collect();
    let mut v = json!({
        "name": cmd.get_name(),
        "about": cmd.get_about().map(|h| h.to_string()),
        "args": args,
    });
    if !subcommands.is_empty() {
        v["subcommands"] = Value::Array(subcommands);
    }
    v
}

/// Returns the description when both `--help` and `--json` are present.
pub fn json_help(root: &Command, argv: &[String]) -> Option<Value> {
    let rest = argv.get(1..).unwrap_or_default();
    if !(rest.iter().any(|a| a == "--help" || a == "-h") && rest.iter().any(|a| a == "--json")) {
        return None;
    }
    let sub = rest.iter().find(|a| !a.starts_with('-'));
    match sub.and_then(|name| root.find_subcommand(name)) {
        Some(c) => Some(describe(c)),
        None => Some(describe(root)),
    }
}
