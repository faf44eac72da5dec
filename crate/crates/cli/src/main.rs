mod commands;
mod config;
mod paper;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use psiseries::Error;
use serde_json::{json, Value};

use config::{Command, Format};

#[derive(Parser, Debug)]
#[command(name = "psiseries", version, about = "Psi-series asymptotics for quadratic tree recurrences")]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    /// Re-run the configuration stored in a JSON report
    #[arg(long)]
    from_report: Option<PathBuf>,
    /// Output path for --from-report
    #[arg(long, requires = "from_report")]
    output: Option<PathBuf>,
}

const USAGE: u8 = 2;
const NUMERIC: u8 = 3;
const UNSUPPORTED: u8 = 4;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_) => USAGE,
        Error::Unsupported(_) => UNSUPPORTED,
        _ => NUMERIC,
    }
}

fn load_report(path: &PathBuf) -> Result<Command, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    if v.get("schema") != Some(&json!(1)) {
        return Err("unsupported report schema".into());
    }
    let inputs = v.get("inputs").cloned().ok_or("report has no inputs")?;
    serde_json::from_value(inputs).map_err(|e| format!("bad inputs: {e}"))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render(cmd: &Command, out: &commands::Output) -> String {
    let o = cmd.opts();
    match o.format {
        Format::Json => {
            let mut report = json!({
                "schema": 1,
                "command": cmd.name(),
                "inputs": cmd,
                "decimal_digits": o.out_digits(),
                "precision_bits": o.prec,
                "results": out.results,
                "notes": out.notes,
            });
            if o.compare_paper {
                report["paper"] = Value::Array(paper::compare(&out.computed, o.digits));
            }
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = out.header.join(",");
            s.push('\n');
            for r in &out.rows {
                let line: Vec<String> = r.iter().map(|f| csv_field(f)).collect();
                s.push_str(&line.join(","));
                s.push('\n');
            }
            s
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let cmd = match (cli.command, &cli.from_report) {
        (Some(c), None) => c,
        (None, Some(p)) => match load_report(p) {
            Ok(mut c) => {
                c.opts_mut().output = cli.output.clone();
                c
            }
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(USAGE);
            }
        },
        _ => {
            eprintln!("error: give a subcommand or --from-report (see --help)");
            return ExitCode::from(USAGE);
        }
    };
    let out = match commands::run(&cmd) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let text = render(&cmd, &out);
    let written = match &cmd.opts().output {
        Some(p) => std::fs::write(p, text.as_bytes()),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(NUMERIC);
    }
    ExitCode::SUCCESS
}
