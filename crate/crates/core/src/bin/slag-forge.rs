use clap::Parser;
use slag_forge::cli::{init_threads, run, Cli, EXIT_USAGE};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        std::process::exit(EXIT_USAGE);
    }
    let (code, text) = run(&cli);
    if code == EXIT_USAGE {
        eprint!("{text}");
    } else {
        print!("{text}");
    }
    std::process::exit(code);
}
