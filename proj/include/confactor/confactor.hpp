#pragma once

#include "confactor/extremal.hpp"
#include "confactor/factors.hpp"
#include "confactor/io.hpp"
#include "confactor/olevsky.hpp"
#include "confactor/ons.hpp"
#include "confactor/piecewise.hpp"
#include "confactor/rational.hpp"
#include "confactor/search.hpp"
