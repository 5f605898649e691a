fn main() {
    std::process::exit(pinchlab_cli::main_entry());
}
