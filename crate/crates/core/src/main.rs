use std::io;

use contact_spectra::cli;

fn main() {
    let env_tol = std::env::var(cli::TOL_ENV).ok();
    let code = cli::main_with(
        std::env::args_os(),
        env_tol.as_deref(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    std::process::exit(code);
}
