#pragma once

#include <sgec/assignment.hpp>
#include <sgec/datasets.hpp>
#include <sgec/embedding.hpp>
#include <sgec/error.hpp>
#include <sgec/graph.hpp>
#include <sgec/io.hpp>
#include <sgec/linalg.hpp>
#include <sgec/metrics.hpp>
#include <sgec/pipeline.hpp>
