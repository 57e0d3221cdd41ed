#include <catch2/catch_amalgamated.hpp>
#include "stiefac/stiefac.hpp"
