#pragma once

#include "catdb/error.hpp"
#include "catdb/finset.hpp"
#include "catdb/graph.hpp"
#include "catdb/schema.hpp"
#include "catdb/instance.hpp"
#include "catdb/migrate.hpp"
#include "catdb/kleisli.hpp"
#include "catdb/io.hpp"
