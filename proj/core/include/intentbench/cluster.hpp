#pragma once

#include "intentbench/cluster/agglomerative.hpp"
#include "intentbench/cluster/birch.hpp"
#include "intentbench/cluster/dbscan.hpp"
#include "intentbench/cluster/kmeans.hpp"
#include "intentbench/cluster/model_selection.hpp"
#include "intentbench/cluster/result.hpp"
#include "intentbench/cluster/spectral.hpp"
