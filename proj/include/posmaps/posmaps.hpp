#pragma once

#include "posmaps/errors.hpp"
#include "posmaps/operators.hpp"
#include "posmaps/random.hpp"
#include "posmaps/states.hpp"
#include "posmaps/channels.hpp"
#include "posmaps/extremality.hpp"
#include "posmaps/wigner.hpp"
#include "posmaps/ballmaps.hpp"
#include "posmaps/catalog.hpp"
#include "posmaps/io.hpp"
