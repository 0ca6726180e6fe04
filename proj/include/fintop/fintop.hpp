#pragma once

// umbrella header

#include "fintop/canopy.hpp"
#include "fintop/catalog.hpp"
#include "fintop/diffuse.hpp"
#include "fintop/errors.hpp"
#include "fintop/family.hpp"
#include "fintop/group_action.hpp"
#include "fintop/group_quotient.hpp"
#include "fintop/io.hpp"
#include "fintop/lambda.hpp"
#include "fintop/map.hpp"
#include "fintop/morphism_equality.hpp"
#include "fintop/negligible.hpp"
#include "fintop/schwarz.hpp"
#include "fintop/space.hpp"
