use clap::Parser;

mod args;
mod diag_cmd;
mod run;
mod sort_cmd;
mod witness_cmd;

fn main() {
    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap would exit(2) on its own; usage problems are exit 1 here.
            if e.use_stderr() {
                eprint!("{e}");
                std::process::exit(1);
            }
            print!("{e}");
            std::process::exit(0);
        }
    };
    std::process::exit(run::run(cli));
}
