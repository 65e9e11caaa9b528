#include "sdgs/cli.hpp"

int main(int argc, char** argv) {
    return sdgs::cli::run(argc, argv);
}
