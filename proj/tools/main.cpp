#include "cyborgnav/cli.hpp"

int main(int argc, char** argv)
{
    return cyborgnav::run_cli(argc, argv);
}
