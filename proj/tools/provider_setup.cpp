#include "provider_setup.hpp"

#include "factcheck/providers/http_backend.hpp"
#include "factcheck/providers/scenario_backend.hpp"

namespace factcheck::cli {

namespace fs = std::filesystem;

ProviderSetup make_providers(const ProviderFlags& flags) {
  ProviderSetup setup;
  GatewayOptions options;
  try {
    options.mode = parse_provider_mode(flags.mode);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (flags.backend != "http" && flags.backend != "scenario") {
    throw UsageError("--backend must be http or scenario");
  }

  auto store = std::make_shared<ReplayStore>();
  if (!flags.fixtures.empty()) setup.fixtures = fs::path(flags.fixtures);
  if (options.mode == ProviderMode::replay) {
    if (!setup.fixtures) throw UsageError("replay mode needs --fixtures");
    if (!fs::exists(*setup.fixtures)) {
      throw UsageError("fixtures file not found: " + setup.fixtures->string());
    }
  }
  if (options.mode == ProviderMode::record && !setup.fixtures) {
    throw UsageError("record mode needs --fixtures");
  }
  if (setup.fixtures && fs::exists(*setup.fixtures)) store->merge_file(*setup.fixtures);
  if (options.mode == ProviderMode::record) store->attach_journal(*setup.fixtures);

  std::shared_ptr<Backend> backend;
  if (flags.backend == "scenario") {
    if (flags.scenario.empty()) throw UsageError("--backend scenario needs --scenario");
    backend = ScenarioBackend::load(flags.scenario);
    // The simulated backend never touches the network; the counter stays 0.
    setup.transport = std::make_shared<CountingTransport>();
  } else {
    const bool offline = options.mode == ProviderMode::replay;
    setup.transport = std::make_shared<CountingTransport>(
        offline ? nullptr : std::make_shared<HttplibTransport>());
    std::optional<fs::path> settings;
    if (!flags.providers_file.empty()) settings = fs::path(flags.providers_file);
    backend = std::make_shared<HttpBackend>(ProviderSettings::from_environment(settings),
                                            setup.transport);
  }
  setup.gateway = std::make_shared<Gateway>(options, store, backend);
  return setup;
}

void ProviderSetup::finish() const {
  if (gateway && gateway->mode() == ProviderMode::record && fixtures) {
    gateway->store().write_sorted(*fixtures);
  }
}

}  // namespace factcheck::cli
