#include "tlsph/cli.hpp"

int main(int argc, char **argv)
{
    return tlsph::cli_main(argc, argv);
}
