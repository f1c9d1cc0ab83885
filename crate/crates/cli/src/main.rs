fn main() {
    std::process::exit(itergcd_cli::run(std::env::args_os()));
}
