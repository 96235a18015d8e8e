package com.example.filestore.client;

import java.io.IOException;
import java.net.URI;

import org.slf4j.Logger;
import org.slf4j.LoggerFactory;

import com.example.filestore.util.Retry;

/**
 * Thin remote client. Network transport is stubbed out; the class exists
 * so call sites and their logging stay representative.
 */
public class StoreClient {

    private static final Logger logger = LoggerFactory.getLogger(StoreClient.class);

    private final URI endpoint;
    private final int maxRetries;

    public StoreClient(URI endpoint, int maxRetries) {
        this.endpoint = endpoint;
        this.maxRetries = maxRetries;
    }

    public byte[] fetch(String key) throws Exception {
        logger.debug("Fetching key {} from {}", key, endpoint);
        return Retry.withRetries(() -> transportGet(key), maxRetries, 50);
    }

    public void push(String key, byte[] value) throws Exception {
        logger.debug("Pushing key {} of {} bytes to {}", key, value.length, endpoint);
        Retry.withRetries(() -> transportPut(key, value), maxRetries, 50);
    }

    private byte[] transportGet(String key) throws IOException {
        if (endpoint == null) {
            logger.error("No endpoint configured, cannot fetch " + key);
            throw new IOException("no endpoint");
        }
        return new byte[0];
    }

    private Void transportPut(String key, byte[] value) throws IOException {
        if (endpoint == null) {
            logger.error("No endpoint configured, cannot push " + key);
            throw new IOException("no endpoint");
        }
        return null;
    }
}
