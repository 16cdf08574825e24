use std::ffi::OsString;

fn main() {
    let args: Vec<OsString> = std::env::args_os().collect();
    let mut stdout = std::io::stdout().lock();
    let code = parastrat::cli::run(&args, &mut stdout);
    std::process::exit(code);
}
