#pragma once

#include "relquad/integer.hpp"
#include "relquad/basefield.hpp"
#include "relquad/ideals.hpp"
#include "relquad/dyadic.hpp"
#include "relquad/discriminants.hpp"
#include "relquad/characters.hpp"
#include "relquad/counting.hpp"
#include "relquad/hurwitz.hpp"
#include "relquad/tables.hpp"
#include "relquad/parallel.hpp"
#include "relquad/verify.hpp"
