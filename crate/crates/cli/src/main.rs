fn main() {
    let args: Vec<String> = std::env::args().collect();
    let (code, out) = robba_cli::run(&args);
    println!("{out}");
    std::process::exit(code);
}
