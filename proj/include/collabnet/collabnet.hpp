#pragma once

#include "collabnet/bibliometrics.hpp"
#include "collabnet/clustering.hpp"
#include "collabnet/components.hpp"
#include "collabnet/corpus.hpp"
#include "collabnet/degree.hpp"
#include "collabnet/distances.hpp"
#include "collabnet/error.hpp"
#include "collabnet/fixture.hpp"
#include "collabnet/generators.hpp"
#include "collabnet/graphml.hpp"
#include "collabnet/network.hpp"
#include "collabnet/percolation.hpp"
#include "collabnet/pipeline.hpp"
#include "collabnet/powerlaw.hpp"
#include "collabnet/report.hpp"
#include "collabnet/xml.hpp"
#include "collabnet/zeta.hpp"
