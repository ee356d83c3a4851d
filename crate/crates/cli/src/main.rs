use std::process::exit;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let (code, stdout, stderr) = crosses_cli::execute(&args);
    print!("{stdout}");
    eprint!("{stderr}");
    exit(code);
}
