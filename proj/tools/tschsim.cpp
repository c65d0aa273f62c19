#include "tschsim/cli.hpp"

int main(int argc, char** argv) {
    return tschsim::run_cli(argc, argv);
}
