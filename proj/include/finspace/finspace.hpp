#pragma once

#include "finspace/element_set.hpp"
#include "finspace/poset.hpp"
#include "finspace/hasse_io.hpp"
#include "finspace/simplicial.hpp"
#include "finspace/smith.hpp"
#include "finspace/homology.hpp"
#include "finspace/reduction.hpp"
#include "finspace/wedge.hpp"
#include "finspace/splitter.hpp"
#include "finspace/certificate_json.hpp"
#include "finspace/canonical.hpp"
#include "finspace/enumeration.hpp"
#include "finspace/fixtures.hpp"
