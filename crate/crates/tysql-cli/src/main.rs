//! Command-line front end: compile ER models into databases and info
//! files, check and translate dialect statements, and run them with named
//! parameter bindings.
//!
//! Exit codes partition the failure classes: 1 for compile-time errors
//! (ER or SQL), 2 for I/O problems, 3 for database errors at run time.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tysql::db::exec::resolve_slots;
use tysql::erd::{build_parser_info, emit_ddl, parse_erd, read_info, transform, write_info};
use tysql::plan::{QueryPlan, Slot};
use tysql::sql::parse_script;
use tysql::value::{SqlType, SqlValue};
use tysql::{analyze, render, translate, Connection, ParserInfo, PlanOutput};

/// Environment variable overriding the database path stored in the info
/// file (the `--db` flag wins over both).
const DB_ENV: &str = "TYSQL_DB";

#[derive(Parser)]
#[command(name = "tysql", version, about = "ER-checked SQL compiler and runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile an ER model: create the database and its info file.
    ErdCompile {
        /// ER model source file.
        file: PathBuf,
        /// Database file to create; the info file lands next to it.
        #[arg(long)]
        db: PathBuf,
        /// Overwrite an existing database file.
        #[arg(long)]
        force: bool,
    },
    /// Check the statements of a file against a compiled model.
    Check {
        /// File of semicolon-terminated statements.
        file: PathBuf,
        #[command(flatten)]
        info: InfoArg,
    },
    /// Translate statements to parameterized SQL or a plan dump.
    Translate {
        /// A statement, or the path of a file of statements.
        statement: String,
        #[command(flatten)]
        info: InfoArg,
        /// Output format.
        #[arg(long, value_parser = ["sql", "plan"], default_value = "sql")]
        format: String,
    },
    /// Execute statements with `--param name=value` bindings.
    Run {
        /// A statement, or the path of a file of statements.
        statement: String,
        #[command(flatten)]
        info: InfoArg,
        /// A binding for one placeholder, repeatable. `null` binds null.
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
        /// Database path, overriding the info file and TYSQL_DB.
        #[arg(long)]
        db: Option<PathBuf>,
    },
}

#[derive(Args)]
struct InfoArg {
    /// Info file produced by erd-compile.
    #[arg(long)]
    info: PathBuf,
}

const EXIT_COMPILE: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_DB: u8 = 3;

struct Failure {
    code: u8,
    message: Option<String>,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure {
            code,
            message: Some(message.into()),
        }
    }

    /// Errors already reported to stderr line by line.
    fn reported(code: u8) -> Failure {
        Failure {
            code,
            message: None,
        }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::ErdCompile { file, db, force } => erd_compile(&file, &db, force),
        Command::Check { file, info } => check(&file, &info.info),
        Command::Translate {
            statement,
            info,
            format,
        } => translate_cmd(&statement, &info.info, &format),
        Command::Run {
            statement,
            info,
            params,
            db,
        } => run_cmd(&statement, &info.info, &params, db.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            if let Some(message) = failure.message {
                eprintln!("error: {message}");
            }
            ExitCode::from(failure.code)
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_IO, format!("cannot read {}: {e}", path.display())))
}

fn load_info(path: &Path) -> Result<ParserInfo, Failure> {
    read_info(path).map_err(|e| {
        Failure::new(EXIT_IO, format!("cannot load info {}: {e}", path.display()))
    })
}

fn erd_compile(file: &Path, db: &Path, force: bool) -> CmdResult {
    let source = read_text(file)?;
    let model = match parse_erd(&source) {
        Ok(model) => model,
        Err(errors) => {
            for e in errors {
                eprintln!("{e}");
            }
            return Err(Failure::reported(EXIT_COMPILE));
        }
    };

    let db = std::path::absolute(db)
        .map_err(|e| Failure::new(EXIT_IO, format!("cannot resolve {}: {e}", db.display())))?;
    if db.exists() {
        if !force {
            return Err(Failure::new(
                EXIT_IO,
                format!("{} already exists (use --force to overwrite)", db.display()),
            ));
        }
        std::fs::remove_file(&db)
            .map_err(|e| Failure::new(EXIT_IO, format!("cannot remove {}: {e}", db.display())))?;
    }

    let schema = transform(&model);
    let conn = Connection::connect(&db)
        .map_err(|e| Failure::new(EXIT_DB, e.to_string()))?;
    conn.execute_batch(&emit_ddl(&schema))
        .map_err(|e| Failure::new(EXIT_DB, e.to_string()))?;

    let info = build_parser_info(&model, &schema, db.to_string_lossy());
    let info_path = db.with_extension("info");
    write_info(&info, &info_path)
        .map_err(|e| Failure::new(EXIT_IO, format!("cannot write info file: {e}")))?;

    println!(
        "compiled model {}: {} tables, {} relationships",
        model.name,
        schema.tables.len(),
        model.relationships.len()
    );
    println!("database: {}", db.display());
    println!("info: {}", info_path.display());
    Ok(())
}

/// Parses and analyzes every statement of `text`, printing the first
/// error of each failing statement. Returns the surviving plans.
fn compile_script(text: &str, info: &ParserInfo) -> Result<Vec<QueryPlan>, Failure> {
    let mut plans = Vec::new();
    let mut failed = false;
    for parsed in parse_script(text) {
        match parsed {
            Err(e) => {
                eprintln!("{e}");
                failed = true;
            }
            Ok(stmt) => match analyze(&stmt, info) {
                Err(errors) => {
                    eprintln!("{}", errors[0]);
                    failed = true;
                }
                Ok(typed) => plans.push(translate(&typed, info)),
            },
        }
    }
    if failed {
        Err(Failure::reported(EXIT_COMPILE))
    } else {
        Ok(plans)
    }
}

fn check(file: &Path, info_path: &Path) -> CmdResult {
    let text = read_text(file)?;
    let info = load_info(info_path)?;
    compile_script(&text, &info).map(|_| ())
}

/// The statement argument is inline text unless it names an existing
/// file.
fn statement_text(arg: &str) -> Result<String, Failure> {
    let path = Path::new(arg);
    if path.exists() {
        read_text(path)
    } else {
        Ok(arg.to_string())
    }
}

fn translate_cmd(statement: &str, info_path: &Path, format: &str) -> CmdResult {
    let text = statement_text(statement)?;
    let info = load_info(info_path)?;
    let plans = compile_script(&text, &info)?;
    for (i, plan) in plans.iter().enumerate() {
        if i > 0 {
            println!();
        }
        match format {
            "plan" => print!("{}", plan.describe()),
            _ => {
                let rendered = render(plan);
                println!("{}", rendered.text);
                for (index, slot) in rendered.slots.iter().enumerate() {
                    match slot {
                        Slot::Param { name, ty, .. } => {
                            println!("-- slot {}: {{{name}}}: {ty}", index + 1)
                        }
                        Slot::Const(value) => {
                            let ty = value
                                .type_of()
                                .map(|t| t.name().to_string())
                                .unwrap_or_else(|| "Null".into());
                            println!("-- slot {}: constant {ty}", index + 1)
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Splits and coerces `--param name=value` arguments using the slot
/// types of the compiled plans.
fn parse_bindings(
    params: &[String],
    plans: &[QueryPlan],
) -> Result<BTreeMap<String, SqlValue>, Failure> {
    // the union of all plans' parameter slots names the expected types
    let mut expected: BTreeMap<String, SqlType> = BTreeMap::new();
    for plan in plans {
        for (name, ty, _) in plan.params() {
            if let Some(previous) = expected.insert(name.clone(), ty) {
                if previous != ty {
                    return Err(Failure::new(
                        EXIT_COMPILE,
                        format!("parameter `{name}` has conflicting types across statements"),
                    ));
                }
            }
        }
    }

    let mut bindings = BTreeMap::new();
    for raw in params {
        let Some((name, value)) = raw.split_once('=') else {
            return Err(Failure::new(
                EXIT_COMPILE,
                format!("invalid --param `{raw}`, expected name=value"),
            ));
        };
        let Some(ty) = expected.get(name) else {
            return Err(Failure::new(
                EXIT_COMPILE,
                format!("unknown parameter: {name}"),
            ));
        };
        bindings.insert(name.to_string(), coerce(name, value, *ty)?);
    }

    for name in expected.keys() {
        if !bindings.contains_key(name) {
            return Err(Failure::new(
                EXIT_COMPILE,
                format!("missing parameter: {name}"),
            ));
        }
    }
    Ok(bindings)
}

fn coerce(name: &str, value: &str, ty: SqlType) -> Result<SqlValue, Failure> {
    if value == "null" {
        return Ok(SqlValue::Null);
    }
    let bad = |what: &str| {
        Failure::new(
            EXIT_COMPILE,
            format!("parameter `{name}` expects {what}, got `{value}`"),
        )
    };
    Ok(match ty {
        SqlType::Int => SqlValue::Int(value.parse().map_err(|_| bad("an integer"))?),
        SqlType::Date => SqlValue::Date(value.parse().map_err(|_| bad("epoch seconds"))?),
        SqlType::Float => SqlValue::Float(value.parse().map_err(|_| bad("a number"))?),
        SqlType::Bool => match value {
            "true" => SqlValue::Bool(true),
            "false" => SqlValue::Bool(false),
            _ => return Err(bad("true or false")),
        },
        SqlType::Char => {
            let mut chars = value.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => SqlValue::Char(c),
                _ => return Err(bad("a single character")),
            }
        }
        SqlType::String => SqlValue::String(value.to_string()),
    })
}

fn run_cmd(
    statement: &str,
    info_path: &Path,
    params: &[String],
    db_flag: Option<&Path>,
) -> CmdResult {
    let text = statement_text(statement)?;
    let info = load_info(info_path)?;
    let plans = compile_script(&text, &info)?;
    let bindings = parse_bindings(params, &plans)?;

    // binding problems are compile-side failures: validate every slot
    // before touching the database
    for plan in &plans {
        resolve_slots(&render(plan).slots, &bindings)
            .map_err(|e| Failure::new(EXIT_COMPILE, e.message.clone()))?;
    }

    let db_path: PathBuf = match db_flag {
        Some(path) => path.to_path_buf(),
        None => match std::env::var_os(DB_ENV) {
            Some(path) => PathBuf::from(path),
            None => PathBuf::from(&info.db_path),
        },
    };

    let conn = Connection::connect(&db_path).map_err(|e| Failure::new(EXIT_DB, e.to_string()))?;
    for plan in &plans {
        match tysql::run_plan(&conn, plan, &bindings)
            .map_err(|e| Failure::new(EXIT_DB, e.to_string()))?
        {
            PlanOutput::Rows(rows) => {
                for row in rows {
                    let line: Vec<String> = row.iter().map(ToString::to_string).collect();
                    println!("{}", line.join("\t"));
                }
            }
            PlanOutput::Affected(n) => println!("affected {n}"),
        }
    }
    Ok(())
}
