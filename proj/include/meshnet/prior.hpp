#pragma once

#include "meshnet/mesh.hpp"

namespace meshnet {

/* Built-in knowledge planted before any data arrives: number lines, the month
 * cycle, the hour/minute skeleton and the operator sets.  Each builder is
 * idempotent — rebuilding finds the existing subnet by name and re-inserting
 * members only bumps occurrence counts. */

/* Integer line [min, max]: consecutive values joined by a directed "less
 * than" edge, and every multi-digit value joined to its digit neurons with
 * "part k of n" edges (skipped when a digit lies outside the range). */
SubnetId build_integer_subnet(Mesh& mesh, long long min, long long max);

/* Decimal grid min, min+step, ..., max.  All three must carry one uniform
 * precision; consecutive values get the directed "less than" edge. */
SubnetId build_decimal_subnet(Mesh& mesh, const Decimal& min, const Decimal& max,
                              const Decimal& step);

/* January..December joined in a closed directed "next" cycle (Dec -> Jan). */
SubnetId build_month_subnet(Mesh& mesh);

/* The two time-structure cells, Token("hour") and Token("minute"), joined. */
SubnetId build_time_subnet(Mesh& mesh);

/* Arithmetic {+, −, ×, ÷} and relational {<, >, =, ≤, ≥, ≠} subnets, each
 * fully connected internally.  Returns (arithmetic, relational). */
std::pair<SubnetId, SubnetId> build_operator_subnets(Mesh& mesh);

/* Cross-links the catalog: month i to integer i, Token("hour") to integers
 * 1..24, Token("minute") to integers 0..59 (where the integer line covers
 * them), and each operator subnet to every prior subnet at subnet level.
 * Returns the number of connections created; a second invocation creates
 * none and bumps occurrences instead. */
int link_prior(Mesh& mesh);

/* Joins every member of an attribute subnet to its prior anchors: integers
 * and decimals to their equals, dates to day-integer and month, times to
 * hour-integer and Token("hour").  Returns the number of connections
 * created. */
int link_attribute_to_prior(Mesh& mesh, SubnetId attribute_subnet);

/* Same linking for a single neuron; used incrementally during training. */
int link_neuron_to_prior(Mesh& mesh, NeuronId n);

}  // namespace meshnet
