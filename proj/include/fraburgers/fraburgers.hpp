#pragma once

#include "fraburgers/analysis.hpp"
#include "fraburgers/config.hpp"
#include "fraburgers/csv.hpp"
#include "fraburgers/errors.hpp"
#include "fraburgers/evolution.hpp"
#include "fraburgers/field.hpp"
#include "fraburgers/forcing.hpp"
#include "fraburgers/grid.hpp"
#include "fraburgers/inequalities.hpp"
#include "fraburgers/manifest.hpp"
#include "fraburgers/params.hpp"
#include "fraburgers/spectral.hpp"
#include "fraburgers/steady.hpp"
#include "fraburgers/steady_constants.hpp"
#include "fraburgers/verify.hpp"
#include "fraburgers/version.hpp"
