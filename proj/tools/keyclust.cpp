#include "keyclust/cli.hpp"

int main(int argc, char** argv) {
    return keyclust::execute(argc, argv);
}
